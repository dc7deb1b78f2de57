//! Lattice input files.
//!
//! Two shapes are accepted, distinguished by `kind`:
//!
//! ```json
//! {"kind": "standard", "r": 2, "lambda": "pi/2", "x": "0", "y": "1",
//!  "xi": ["1/2", "0"], "z0": "0"}
//! {"kind": "generators", "form_scale": "1", "lambda": "pi/4",
//!  "x": "0", "y": "1", "generators": [["1", "0", "0", "0"], ...]}
//! ```
//!
//! Every scalar is a string in the exact literal grammar (`p/q`,
//! `p/q+r/s*sqrt(D)`), never a JSON number.

use std::fmt;
use std::path::Path;

use osclat_core::classify::{LatticeInput, LatticeSpec};
use osclat_core::group::StructureMatrix;
use osclat_core::heisnorm::{RawElement, RawLatticeInput, RawStructure};
use osclat_core::scalar::{
    is_square_free, parse_pi_multiple, parse_rational, parse_scalar, AngleSymbol, ExactScalar,
    Rational, DEFAULT_DISCRIMINANT,
};
use osclat_core::OscError;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpecDocument {
    Standard {
        r: u64,
        lambda: String,
        x: String,
        y: String,
        xi: [String; 2],
        #[serde(default)]
        z0: Option<String>,
    },
    Generators {
        form_scale: String,
        lambda: String,
        x: String,
        y: String,
        generators: Vec<[String; 4]>,
    },
}

/// Failure to turn a file into a lattice input, before any mathematics.
#[derive(Debug)]
pub enum InputError {
    Io(String),
    Syntax(String),
    /// A field failed to parse; the first component is its path.
    Field(String, OscError),
    /// The data parsed but is not a lattice (or an internal check failed).
    Math(OscError),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(m) | InputError::Syntax(m) => f.write_str(m),
            InputError::Field(path, e) => write!(f, "{path}: {e}"),
            InputError::Math(e) => write!(f, "{e}"),
        }
    }
}

/// The square-free `D` of `Q(√D)`, from `OSCLAT_DISCRIMINANT` when set.
pub fn discriminant() -> Result<u32, InputError> {
    match std::env::var("OSCLAT_DISCRIMINANT") {
        Err(_) => Ok(DEFAULT_DISCRIMINANT),
        Ok(v) => {
            let d: u32 = v.trim().parse().map_err(|_| {
                InputError::Field(
                    "OSCLAT_DISCRIMINANT".into(),
                    OscError::Parse(format!("{v:?} is not a positive integer")),
                )
            })?;
            if d < 2 || !is_square_free(d) {
                return Err(InputError::Field(
                    "OSCLAT_DISCRIMINANT".into(),
                    OscError::InvalidDiscriminant(d),
                ));
            }
            Ok(d)
        }
    }
}

/// Field parser bound to one discriminant.
pub struct Fields {
    d: u32,
}

impl Fields {
    pub fn new(d: u32) -> Fields {
        Fields { d }
    }

    pub fn scalar(&self, path: &str, s: &str) -> Result<ExactScalar, InputError> {
        let v = parse_scalar(s).map_err(|e| InputError::Field(path.into(), e))?;
        match v.discriminant() {
            Some(d) if d != self.d => Err(InputError::Field(
                path.into(),
                OscError::DiscriminantMismatch(d, self.d),
            )),
            _ => Ok(v),
        }
    }

    pub fn rational(&self, path: &str, s: &str) -> Result<Rational, InputError> {
        parse_rational(s).map_err(|e| InputError::Field(path.into(), e))
    }

    pub fn pi_multiple(&self, path: &str, s: &str) -> Result<Rational, InputError> {
        parse_pi_multiple(s).map_err(|e| InputError::Field(path.into(), e))
    }

    /// A structure matrix `λB_{x,y}`. A negative `λ` is rewritten as
    /// `|λ|·(−B)`, which is the same matrix.
    pub fn structure(&self, lambda: &str, x: &str, y: &str) -> Result<StructureMatrix, InputError> {
        let q = self.pi_multiple("lambda", lambda)?;
        let x = self.scalar("x", x)?;
        let y = self.scalar("y", y)?;
        let (q, y) = if q < Rational::from_integer(0.into()) {
            (-q, -y)
        } else {
            (q, y)
        };
        let angle = AngleSymbol::from_pi_multiple(&q).ok_or_else(|| {
            InputError::Math(OscError::NonLattice(format!(
                "trace constraint: angle {lambda} is not in {{pi/3, pi/2, 2pi/3, pi}} + k*pi"
            )))
        })?;
        StructureMatrix::new(angle, x, y).map_err(|e| InputError::Field("y".into(), e))
    }
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<SpecDocument, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Syntax(format!("invalid document: {e}")))
    }

    pub fn load(path: &Path) -> Result<SpecDocument, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError::Io(format!("cannot read {}: {e}", path.display())))?;
        SpecDocument::parse(&text)
    }

    pub fn to_input(&self, fields: &Fields) -> Result<LatticeInput, InputError> {
        match self {
            SpecDocument::Standard {
                r,
                lambda,
                x,
                y,
                xi,
                z0,
            } => {
                if *r == 0 {
                    return Err(InputError::Field(
                        "r".into(),
                        OscError::Parse("r must be a positive integer".into()),
                    ));
                }
                let structure = fields.structure(lambda, x, y)?;
                let xi = [
                    fields.rational("xi[0]", &xi[0])?,
                    fields.rational("xi[1]", &xi[1])?,
                ];
                let z0 = match z0 {
                    Some(z) => fields.scalar("z0", z)?,
                    None => ExactScalar::zero(),
                };
                Ok(LatticeInput::Standard(LatticeSpec::new(
                    *r, structure, xi, z0,
                )))
            }
            SpecDocument::Generators {
                form_scale,
                lambda,
                x,
                y,
                generators,
            } => {
                let form_scale = fields.rational("form_scale", form_scale)?;
                let lambda_over_pi = fields.pi_multiple("lambda", lambda)?;
                let x = fields.scalar("x", x)?;
                let y = fields.scalar("y", y)?;
                let mut gens = Vec::with_capacity(generators.len());
                for (i, [z, a, b, t]) in generators.iter().enumerate() {
                    let p = |j: usize| format!("generators[{i}][{j}]");
                    gens.push(RawElement::new(
                        fields.scalar(&p(0), z)?,
                        [fields.rational(&p(1), a)?, fields.rational(&p(2), b)?],
                        fields.rational(&p(3), t)?,
                    ));
                }
                Ok(LatticeInput::Generators(RawLatticeInput {
                    generators: gens,
                    form_scale,
                    structure: RawStructure {
                        lambda_over_pi,
                        x,
                        y,
                    },
                }))
            }
        }
    }
}

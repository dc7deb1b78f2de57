//! JSON records written one per line. Scalars are exact literals in strings.

use osclat_core::classify::{Classification, LatticeData, OrbitPartition, TableEntry, Xi};
use osclat_core::group::IntMat2;
use osclat_core::verify::CheckOutcome;
use serde::Serialize;

#[derive(Serialize)]
pub struct Angle {
    pub base: String,
    pub k: u64,
}

#[derive(Serialize)]
pub struct DataRecord {
    pub r: u64,
    pub lambda: Angle,
    pub x: String,
    pub y: String,
    pub xi0: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceRecord>,
}

#[derive(Serialize)]
pub struct TraceRecord {
    pub t0: String,
    #[serde(rename = "S")]
    pub s: [[String; 2]; 2],
    pub flip: bool,
    pub transported_xi: [String; 2],
    pub oracle_checked: bool,
}

#[derive(Serialize)]
pub struct TableRecord {
    pub xi0: [String; 2],
    pub class_size: usize,
}

#[derive(Serialize)]
pub struct OrbitRecord {
    pub representative: [String; 2],
    pub size: usize,
    pub members: Vec<[String; 2]>,
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub passed: bool,
    pub count: usize,
    pub detail: String,
}

pub fn xi(v: &Xi) -> [String; 2] {
    [v[0].to_string(), v[1].to_string()]
}

fn mat(m: &IntMat2) -> [[String; 2]; 2] {
    m.m.clone().map(|row| row.map(|e| e.to_string()))
}

pub fn data(d: &LatticeData) -> DataRecord {
    DataRecord {
        r: d.r,
        lambda: Angle {
            base: d.lambda.base.literal().to_string(),
            k: d.lambda.k,
        },
        x: d.point.x().to_string(),
        y: d.point.y().to_string(),
        xi0: xi(&d.xi0),
        trace: None,
    }
}

pub fn classification(c: &Classification, with_trace: bool) -> DataRecord {
    let mut rec = data(&c.data);
    if with_trace {
        rec.trace = Some(TraceRecord {
            t0: c.trace.t0.to_string(),
            s: mat(&c.trace.conjugator),
            flip: c.trace.flip,
            transported_xi: xi(&c.trace.transported_xi),
            oracle_checked: c.trace.oracle_checked,
        });
    }
    rec
}

pub fn table(e: &TableEntry) -> TableRecord {
    TableRecord {
        xi0: xi(&e.xi0),
        class_size: e.class_size,
    }
}

/// Orbits ordered by their least member; members sorted.
pub fn orbits(p: &OrbitPartition) -> Vec<OrbitRecord> {
    let mut out: Vec<(Xi, Vec<Xi>)> = p
        .classes
        .iter()
        .map(|class| {
            let mut members: Vec<Xi> = class.iter().map(|&i| p.points[i].clone()).collect();
            members.sort();
            (members[0].clone(), members)
        })
        .collect();
    out.sort();
    out.into_iter()
        .map(|(rep, members)| OrbitRecord {
            representative: xi(&rep),
            size: members.len(),
            members: members.iter().map(xi).collect(),
        })
        .collect()
}

pub fn check(o: &CheckOutcome) -> CheckRecord {
    CheckRecord {
        check: o.name.to_string(),
        passed: o.passed,
        count: o.count,
        detail: o.detail.clone(),
    }
}

pub fn line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("records serialize")
}

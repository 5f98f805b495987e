use num_bigint::BigInt;
use serde::Serialize;

use super::{CountEngine, MapCountRecord};
use crate::solver::Model;
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// `n_g(3^{4g−4+2d})` for `g = 0..=4` (rows) and `d = 1..=5` (columns).
pub const PUBLISHED_GRID: [[&str; 5]; 5] = [
    ["0", "0", "12", "5184", "9797760"],
    ["3", "4536", "19362240", "164367221760", "2332019568291840"],
    [
        "3061800",
        "89414357760",
        "2834113460935680",
        "110757832882937856000",
        "5405486118155731877068800",
    ],
    [
        "357485480352000",
        "47537982337808793600",
        "5145917103525418098278400",
        "565109847632479817270034432000",
        "67292668731809357356884576436224000",
    ],
    [
        "561734730904309522560000",
        "208281465835272806019563520000",
        "54718895621467446669373094461440000",
        "13121747983829440681173369243486388224000",
        "3139851841193692097800570861728837198151680000",
    ],
];

/// The triangulation grid `(g, d) ↦ n_g(3^{4g−4+2d})`, `k ≤ 0` cells being 0.
#[derive(Clone, Debug, Serialize)]
pub struct TriangulationGrid {
    pub records: Vec<(usize, usize, MapCountRecord)>,
}

impl TriangulationGrid {
    pub fn get(&self, g: usize, d: usize) -> &BigInt {
        &self
            .records
            .iter()
            .find(|(a, b, _)| *a == g && *b == d)
            .expect("cell in range")
            .2
            .count
    }

    /// Cells differing from the printed table.
    pub fn mismatches(&self) -> Vec<(usize, usize, String, String)> {
        self.records
            .iter()
            .filter(|(g, d, r)| r.count.to_string() != PUBLISHED_GRID[*g][*d - 1])
            .map(|(g, d, r)| {
                (
                    *g,
                    *d,
                    r.count.to_string(),
                    PUBLISHED_GRID[*g][*d - 1].to_string(),
                )
            })
            .collect()
    }
}

/// `k = 4g − 4 + 2d`, or `None` when it is not positive.
pub fn grid_k(g: usize, d: usize) -> Option<usize> {
    let k = 4 * g as i64 - 4 + 2 * d as i64;
    (k > 0).then_some(k as usize)
}

pub fn triangulation_grid(
    engine: &mut CountEngine,
    genus_max: usize,
    d_max: usize,
) -> Result<TriangulationGrid> {
    assert_eq!(engine.model(), Model::Tri, "the grid is defined for b = 3");
    let mut records = Vec::new();
    for g in 0..=genus_max {
        for d in 1..=d_max {
            let rec = match grid_k(g, d) {
                Some(k) => engine.count(g, k)?,
                None => MapCountRecord {
                    g,
                    b: 3,
                    k: 0,
                    count: BigInt::from(0),
                    provenance: super::Provenance::Series,
                },
            };
            records.push((g, d, rec));
        }
    }
    Ok(TriangulationGrid { records })
}

pub fn to_csv(records: &[MapCountRecord]) -> String {
    let mut out = String::from("b,g,k,count,provenance\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.b, r.g, r.k, r.count, r.provenance
        ));
    }
    out
}

/// `{"records": [...], "schema_version": 1}` with sorted keys.
pub fn to_json(records: &[MapCountRecord]) -> serde_json::Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "records": serde_json::to_value(records).expect("records serialize"),
    })
}

//! Metrics for fronts read from CSV.

use std::collections::BTreeMap;
use std::io::Read;

use moea_core::metrics::{front_sigma, ssc_with, ud, BeyondReference};

use crate::output::{num, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredFront {
    pub run_id: String,
    pub points: usize,
    pub ssc: Option<f64>,
    pub ud: f64,
    pub sigma: f64,
}

/// Failure reading or scoring a front file.
#[derive(Debug)]
pub enum ScoreError {
    Csv(csv::Error),
    Format(String),
    Metric(moea_core::Error),
}

impl std::fmt::Display for ScoreError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Csv(e) => write!(f, "{e}"),
            Self::Format(m) => f.write_str(m),
            Self::Metric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ScoreError {}

impl From<csv::Error> for ScoreError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e)
    }
}

impl From<moea_core::Error> for ScoreError {
    fn from(e: moea_core::Error) -> Self {
        Self::Metric(e)
    }
}

/// Objective columns are those named `f1`, `f2`, ... . With a `rank`
/// column only rank-1 rows count, and a `run_id` column splits the file
/// into one front per run.
pub fn read_fronts<R: Read>(input: R) -> Result<BTreeMap<String, Vec<Vec<f64>>>, ScoreError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr.headers()?.clone();
    let mut fcols: Vec<(usize, usize)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            h.strip_prefix('f')
                .and_then(|d| d.parse::<usize>().ok())
                .map(|k| (k, i))
        })
        .collect();
    fcols.sort_unstable();
    if fcols.is_empty() {
        return Err(ScoreError::Format(
            "no objective columns (f1, f2, ...)".into(),
        ));
    }
    let rank_col = header.iter().position(|h| h == "rank");
    let run_col = header.iter().position(|h| h == "run_id");
    let mut fronts: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        if let Some(c) = rank_col {
            if rec.get(c) != Some("1") {
                continue;
            }
        }
        let id = run_col.and_then(|c| rec.get(c)).unwrap_or("0").to_string();
        let f = fcols
            .iter()
            .map(|&(_, c)| {
                rec.get(c)
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| ScoreError::Format(format!("line {line}: bad objective value")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        fronts.entry(id).or_default().push(f);
    }
    Ok(fronts)
}

pub fn score_fronts(
    fronts: &BTreeMap<String, Vec<Vec<f64>>>,
    reference: &[f64],
    sigma: Option<f64>,
    beyond: BeyondReference,
) -> Result<Vec<ScoredFront>, ScoreError> {
    fronts
        .iter()
        .map(|(id, pts)| {
            let sigma = match sigma {
                Some(s) => s,
                None => front_sigma(pts)?,
            };
            let ssc = if pts.first().is_some_and(|p| p.len() == 2) {
                Some(ssc_with(pts, reference, beyond)?)
            } else {
                None
            };
            Ok(ScoredFront {
                run_id: id.clone(),
                points: pts.len(),
                ssc,
                ud: ud(pts, sigma, 1.0)?,
                sigma,
            })
        })
        .collect()
}

pub fn render_scores(scores: &[ScoredFront]) -> String {
    let mut t = Table::new(&["run_id", "points", "ssc", "ud", "sigma_used"]);
    for s in scores {
        t.row([
            s.run_id.clone(),
            s.points.to_string(),
            s.ssc.map(num).unwrap_or_default(),
            num(s.ud),
            num(s.sigma),
        ]);
    }
    String::from_utf8(t.into_bytes()).expect("table is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_plain_and_ranked_files() {
        let plain = "f1,f2\n0.2,0.8\n0.5,0.5\n0.8,0.2\n";
        let f = read_fronts(plain.as_bytes()).unwrap();
        assert_eq!(f["0"].len(), 3);
        let s = score_fronts(&f, &[1.0, 1.0], None, BeyondReference::Reject).unwrap();
        assert!((s[0].ssc.unwrap() - 0.37).abs() < 1e-12);

        let ranked = "run_id,f1,f2,rank\n1,0.2,0.8,1\n1,0.9,0.9,2\n2,0.5,0.5,1\n";
        let f = read_fronts(ranked.as_bytes()).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f["1"], vec![vec![0.2, 0.8]]);
    }

    #[test]
    fn rejects_files_without_objectives() {
        assert!(read_fronts("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_fronts("f1,f2\n1,x\n".as_bytes()).is_err());
    }
}

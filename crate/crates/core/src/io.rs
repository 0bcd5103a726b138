//! JSON forms of series and normal forms.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{ActionIndex, MultiIndex, NormalSeries, TruncatedSeries, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub k: Vec<u32>,
    pub kbar: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// `{"n", "M", "min_degree", "terms": [...]}`, optionally with the
/// frequencies `"omega"` and `"tolerance"` attached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(default)]
    pub min_degree: u32,
    pub terms: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl SeriesJson {
    pub fn from_series(s: &TruncatedSeries) -> Self {
        let terms = s
            .iter()
            .map(|(k, c)| TermEntry { k: k.k_vec(), kbar: k.kbar_vec(), re: c.re, im: c.im })
            .collect();
        Self { n: s.n(), m: s.max_degree(), min_degree: s.min_degree(), terms, omega: None, tolerance: None }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries> {
        if self.n == 0 || self.n > crate::algebra::MAX_DOF {
            return Err(Error::Parse(format!("n = {} out of range", self.n)));
        }
        let mut s = TruncatedSeries::with_min_degree(self.n, self.m, self.min_degree);
        for t in &self.terms {
            if t.k.len() != self.n || t.kbar.len() != self.n {
                return Err(Error::Parse(format!("term {:?}/{:?} does not have n = {} entries", t.k, t.kbar, self.n)));
            }
            if t.k.iter().chain(&t.kbar).any(|&e| e > 255) {
                return Err(Error::Parse("exponent above 255".into()));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Parse("non-finite coefficient".into()));
            }
            let k = MultiIndex::new(&t.k, &t.kbar);
            if k.degree() > self.m {
                return Err(Error::Support(format!("term {k:?} exceeds the truncation degree {}", self.m)));
            }
            s.add_term_checked(k, C64::new(t.re, t.im))?;
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionTerm {
    pub l: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// A normal form as a list of action monomials `kappa^l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalJson {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: u32,
    pub terms: Vec<ActionTerm>,
}

impl NormalJson {
    pub fn from_normal(s: &NormalSeries) -> Self {
        let terms = s.iter().map(|(l, c)| ActionTerm { l: l.to_vec(), re: c.re, im: c.im }).collect();
        Self { n: s.n(), m: s.max_degree(), terms }
    }

    pub fn to_normal(&self) -> Result<NormalSeries> {
        let mut out = NormalSeries::new(self.n, self.m);
        for t in &self.terms {
            if t.l.len() != self.n {
                return Err(Error::Parse(format!("action exponent {:?} does not have n = {} entries", t.l, self.n)));
            }
            out.add_term(ActionIndex::new(&t.l), C64::new(t.re, t.im));
        }
        Ok(out)
    }
}

/// Action-monomial map `{"l1,l2,...": [re, im]}`.
pub fn kappa_map(s: &NormalSeries) -> BTreeMap<String, [f64; 2]> {
    s.iter()
        .map(|(l, c)| (l.to_vec().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), [c.re, c.im]))
        .collect()
}

pub fn normal_from_kappa_map(n: usize, m: u32, map: &BTreeMap<String, [f64; 2]>) -> Result<NormalSeries> {
    let mut out = NormalSeries::new(n, m);
    for (key, [re, im]) in map {
        let l: Vec<u32> = if key.is_empty() {
            vec![]
        } else {
            key.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("bad action key {key:?}: {e}"))))
                .collect::<Result<_>>()?
        };
        if l.len() != n {
            return Err(Error::Parse(format!("action key {key:?} does not have {n} entries")));
        }
        out.add_term(ActionIndex::new(&l), C64::new(*re, *im));
    }
    Ok(out)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable")
}

pub fn read_series(path: &Path) -> Result<(TruncatedSeries, SeriesJson)> {
    let raw: SeriesJson = read_json(path)?;
    Ok((raw.to_series()?, raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let s = TruncatedSeries::from_terms(
            2,
            6,
            3,
            [(MultiIndex::new(&[1, 0], &[0, 2]), C64::new(0.5, -1.25)), (MultiIndex::new(&[2, 1], &[0, 1]), C64::new(3.0, 0.0))],
        )
        .unwrap();
        let text = to_json_string(&SeriesJson::from_series(&s));
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }

    #[test]
    fn rejects_bad_terms() {
        let bad = r#"{"n":1,"M":4,"min_degree":3,"terms":[{"k":[1],"kbar":[1],"re":1,"im":0}]}"#;
        let j: SeriesJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(j.to_series(), Err(Error::Support(_))));
        let bad = r#"{"n":1,"M":4,"terms":[{"k":[1,0],"kbar":[1],"re":1,"im":0}]}"#;
        let j: SeriesJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(j.to_series(), Err(Error::Parse(_))));
    }

    #[test]
    fn kappa_map_round_trip() {
        let n = NormalSeries::from_terms(2, 8, [(ActionIndex::new(&[1, 2]), C64::new(1.0, 0.5))]);
        let m = kappa_map(&n);
        assert_eq!(m["1,2"], [1.0, 0.5]);
        assert_eq!(normal_from_kappa_map(2, 8, &m).unwrap(), n);
    }
}

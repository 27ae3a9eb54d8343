use serde::{Deserialize, Serialize};

use super::bounds::{cumulant_bound, term_chain_bound};
use super::diagram::{exact_cumulant, CumulantOptions};
use super::empirical::{empirical_cumulants, EmpiricalOptions};
use crate::kernels::{compute_k, SymmetricKernel};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantRecord {
    pub q: usize,
    pub m: usize,
    pub exact: Option<f64>,
    pub empirical: Option<f64>,
    pub se: Option<f64>,
    /// `|Π(q[m])| K^{L(q,m)}`.
    pub term_bound: Option<f64>,
    /// `(m!)^{q/2} (q^{3q/2})^{m−2} K^{α(m−2)}`.
    pub aggregate_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantReport {
    pub records: Vec<CumulantRecord>,
}

impl CumulantReport {
    /// Exact cumulants and both bounds for `m = 1..=max_m`; empirical
    /// estimates are filled in when `samples` is given (orders up to 6).
    pub fn build(
        h: &SymmetricKernel<f64>,
        max_m: usize,
        samples: Option<&[f64]>,
        opts: &CumulantOptions,
        emp_opts: &EmpiricalOptions,
    ) -> Result<Self> {
        let q = h.order();
        let k = if q >= 2 { Some(compute_k(&h.normalize()?)?) } else { None };
        let emp = match samples {
            Some(s) => Some(empirical_cumulants(s, max_m.min(6), emp_opts)?),
            None => None,
        };
        let mut records = Vec::with_capacity(max_m);
        for m in 1..=max_m {
            let (term_bound, aggregate_bound) = match k {
                Some(k) if m >= 3 => (Some(term_chain_bound(q, m, k)?.value()), Some(cumulant_bound(q, m, k)?.value())),
                _ => (None, None),
            };
            let e = emp.as_ref().and_then(|v| v.get(m - 1));
            records.push(CumulantRecord {
                q,
                m,
                exact: Some(exact_cumulant(h, m, opts)?),
                empirical: e.map(|e| e.value),
                se: e.map(|e| e.se),
                term_bound,
                aggregate_bound,
            });
        }
        Ok(Self { records })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

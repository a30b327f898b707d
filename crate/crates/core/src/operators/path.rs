//! The interpolating Hamiltonian
//! `H(s) = Σ_C [f_B(s) h_{B,C} + f_P(s) h_{P,C} + f_E(s) h_{E,C}]`
//! on the full `2^n`-dimensional register.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::operators::{clause_hp, transverse_projector_sum, ClauseMatrix, Perturbation};
use crate::{CMatrix, C64};

/// Largest register for which [`materialize_dense`] builds a matrix.
pub const DENSE_MAX_BITS: usize = 12;
/// Largest register for matrix-free application.
pub const APPLY_MAX_BITS: usize = 26;

/// Weights of the three terms along the path. Any smooth triple with
/// `f_B(0) = 1, f_B(1) = 0`, `f_P(0) = 0, f_P(1) = 1` and `f_E(0) = f_E(1) = 0`
/// keeps the endpoints fixed.
#[derive(Clone, Copy)]
pub struct Schedule {
    pub beginning: fn(f64) -> f64,
    pub problem: fn(f64) -> f64,
    pub extra: fn(f64) -> f64,
}

impl Schedule {
    /// `(1 - s, s, s(1 - s))`.
    pub fn canonical() -> Self {
        Schedule {
            beginning: |s| 1.0 - s,
            problem: |s| s,
            extra: |s| s * (1.0 - s),
        }
    }

    pub fn weights(&self, s: f64) -> (f64, f64, f64) {
        ((self.beginning)(s), (self.problem)(s), (self.extra)(s))
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self::canonical()
    }
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Schedule").finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
struct ClauseTerm {
    bits: Vec<usize>,
    hb: Arc<ClauseMatrix>,
    hp: ClauseMatrix,
    he: Option<Arc<ClauseMatrix>>,
}

impl ClauseTerm {
    fn local(&self, (wb, wp, we): (f64, f64, f64)) -> CMatrix {
        let mut m = self.hb.matrix() * C64::new(wb, 0.0) + self.hp.matrix() * C64::new(wp, 0.0);
        if let Some(he) = &self.he {
            if we != 0.0 {
                m += he.matrix() * C64::new(we, 0.0);
            }
        }
        m
    }
}

/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct PathHamiltonian {
    n: usize,
    terms: Vec<ClauseTerm>,
    schedule: Schedule,
}

impl PathHamiltonian {
    pub fn new(inst: &Instance, extra: Option<&Perturbation>) -> Result<Self> {
        Self::with_schedule(inst, extra, Schedule::canonical())
    }

    pub fn with_schedule(inst: &Instance, extra: Option<&Perturbation>, schedule: Schedule) -> Result<Self> {
        if let Some(p) = extra {
            if p.len() != inst.clauses().len() {
                return Err(Error::Config(format!(
                    "perturbation has {} terms for {} clauses",
                    p.len(),
                    inst.clauses().len()
                )));
            }
        }
        let mut hb_cache: Vec<Option<Arc<ClauseMatrix>>> = Vec::new();
        let mut terms = Vec::with_capacity(inst.clauses().len());
        for (k, c) in inst.clauses().iter().enumerate() {
            let b = c.arity();
            if hb_cache.len() <= b {
                hb_cache.resize(b + 1, None);
            }
            let hb = hb_cache[b]
                .get_or_insert_with(|| Arc::new(transverse_projector_sum(b)))
                .clone();
            let he = extra.map(|p| Arc::clone(&p.per_clause()[k]));
            if let Some(he) = &he {
                if he.arity() != b {
                    return Err(Error::Config(format!("extra term {k} has the wrong arity")));
                }
            }
            terms.push(ClauseTerm {
                bits: c.bits().to_vec(),
                hb,
                hp: clause_hp(c),
                he,
            });
        }
        Ok(PathHamiltonian {
            n: inst.n(),
            terms,
            schedule,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn has_extra(&self) -> bool {
        self.terms.iter().any(|t| t.he.is_some())
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// `out = H(s) ψ`.
    pub fn apply_into(&self, s: f64, psi: &[C64], out: &mut [C64]) -> Result<()> {
        if self.n > APPLY_MAX_BITS {
            return Err(Error::Capacity {
                what: "bit count for matrix-free application",
                got: self.n,
                limit: APPLY_MAX_BITS,
            });
        }
        if psi.len() != self.dim() || out.len() != self.dim() {
            return Err(Error::input(format!(
                "state of length {} (output {}) for a {}-bit register",
                psi.len(),
                out.len(),
                self.n
            )));
        }
        out.fill(C64::new(0.0, 0.0));
        let w = self.schedule.weights(s);
        for term in &self.terms {
            let local = term.local(w);
            let emb = Embedding::new(self.n, &term.bits);
            let d = emb.offsets.len();
            let mut gathered = vec![C64::new(0.0, 0.0); d];
            emb.for_each_base(|base| {
                for (g, off) in gathered.iter_mut().zip(&emb.offsets) {
                    *g = psi[base | off];
                }
                for r in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..d {
                        acc += local[(r, c)] * gathered[c];
                    }
                    out[base | emb.offsets[r]] += acc;
                }
            });
        }
        Ok(())
    }

    pub fn apply(&self, s: f64, psi: &[C64]) -> Result<Vec<C64>> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply_into(s, psi, &mut out)?;
        Ok(out)
    }

    pub fn materialize(&self, s: f64) -> Result<CMatrix> {
        if self.n > DENSE_MAX_BITS {
            return Err(Error::Capacity {
                what: "bit count for dense materialization",
                got: self.n,
                limit: DENSE_MAX_BITS,
            });
        }
        let dim = self.dim();
        let mut h = CMatrix::zeros(dim, dim);
        let w = self.schedule.weights(s);
        for term in &self.terms {
            let local = term.local(w);
            let emb = Embedding::new(self.n, &term.bits);
            let d = emb.offsets.len();
            emb.for_each_base(|base| {
                for r in 0..d {
                    for c in 0..d {
                        let v = local[(r, c)];
                        if v != C64::new(0.0, 0.0) {
                            h[(base | emb.offsets[r], base | emb.offsets[c])] += v;
                        }
                    }
                }
            });
        }
        Ok(h)
    }
}

/// Matrix-free `H(s) ψ`.
pub fn apply_path(path: &PathHamiltonian, s: f64, psi: &[C64]) -> Result<Vec<C64>> {
    path.apply(s, psi)
}

/// Dense `H(s)`; `n` at most [`DENSE_MAX_BITS`].
pub fn materialize_dense(path: &PathHamiltonian, s: f64) -> Result<CMatrix> {
    path.materialize(s)
}

/// Positions of a clause's bits inside the register's basis index.
struct Embedding {
    n: usize,
    /// Register bit positions (0 = least significant), ascending.
    positions: Vec<usize>,
    /// `offsets[l]` is the register index contribution of local state `l`.
    offsets: Vec<usize>,
}

impl Embedding {
    fn new(n: usize, bits: &[usize]) -> Self {
        let b = bits.len();
        let offsets = (0..1usize << b)
            .map(|l| {
                bits.iter()
                    .enumerate()
                    .filter(|(k, _)| (l >> (b - 1 - k)) & 1 == 1)
                    .map(|(_, &q)| 1usize << (n - 1 - q))
                    .sum()
            })
            .collect();
        let mut positions: Vec<usize> = bits.iter().map(|&q| n - 1 - q).collect();
        positions.sort_unstable();
        Embedding { n, positions, offsets }
    }

    /// Visits every register index whose clause bits are all zero.
    fn for_each_base(&self, mut f: impl FnMut(usize)) {
        let free = self.n - self.positions.len();
        for j in 0..1usize << free {
            let mut base = j;
            for &p in &self.positions {
                let low = base & ((1 << p) - 1);
                base = ((base >> p) << (p + 1)) | low;
            }
            f(base);
        }
    }
}

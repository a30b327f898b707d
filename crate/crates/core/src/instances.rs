//! Local cost functions `h = Σ_C h_C` over bit strings.
//!
//! Bit and table conventions used throughout the crate:
//!
//! - An [`Assignment`] of `n` bits maps to the computational basis index
//!   `Σ_i z_i 2^(n-1-i)`, i.e. bit 0 is the most significant.
//! - A [`Clause`] lists its bits in ascending order and its value table is
//!   indexed by the big-endian word of the clause bits (first clause bit most
//!   significant). The operator embedding in [`crate::operators`] uses the same
//!   order.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest instance accepted by [`min_cost_bruteforce`].
pub const BRUTE_FORCE_MAX_BITS: usize = 24;

/// Value table of the permutation-symmetric three-bit clause, indexed by
/// `(z, z', z'')` in binary order. The value depends only on `z + z' + z''`:
/// 0 for weight 0, 3 for weight 1, 1 for weights 2 and 3.
pub const SYMMETRIC_H3_TABLE: [u64; 8] = [0, 3, 3, 1, 3, 1, 1, 1];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::input(format!("assignment entry {b} is not a bit")));
        }
        Ok(Assignment(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    /// Decodes a basis-state index (bit 0 most significant).
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Which bits of a clause are negated, as a big-endian word over the clause
/// bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NegationMask {
    arity: usize,
    word: usize,
}

impl NegationMask {
    pub fn new(arity: usize, word: usize) -> Result<Self> {
        if word >> arity != 0 {
            return Err(Error::input(format!(
                "negation word {word:#b} does not fit in {arity} bits"
            )));
        }
        Ok(NegationMask { arity, word })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let a = Assignment::new(bits.to_vec())?;
        Ok(NegationMask {
            arity: bits.len(),
            word: a.to_index() as usize,
        })
    }

    pub fn none(arity: usize) -> Self {
        NegationMask { arity, word: 0 }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn word(&self) -> usize {
        self.word
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    bits: Vec<usize>,
    table: Vec<u64>,
}

impl Clause {
    /// `bits` must be strictly ascending and `table` must hold `2^bits.len()`
    /// entries.
    pub fn new(bits: Vec<usize>, table: Vec<u64>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::input("clause must involve at least one bit"));
        }
        for w in bits.windows(2) {
            if w[0] == w[1] {
                return Err(Error::input(format!("duplicate bit index {}", w[0])));
            }
            if w[0] > w[1] {
                return Err(Error::input(format!(
                    "clause bit indices must be strictly ascending, got {bits:?}"
                )));
            }
        }
        if bits.len() >= usize::BITS as usize || table.len() != 1usize << bits.len() {
            return Err(Error::input(format!(
                "clause on {} bits needs {} table entries, got {}",
                bits.len(),
                1u128 << bits.len().min(127),
                table.len()
            )));
        }
        Ok(Clause { bits, table })
    }

    pub fn bits(&self) -> &[usize] {
        &self.bits
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.bits.len()
    }

    /// Index into the value table of the sub-assignment of this clause's bits,
    /// read off a basis-state index of an `n`-bit register.
    #[inline]
    pub fn local_index(&self, n: usize, state: u64) -> usize {
        self.bits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((state >> (n - 1 - q)) & 1) as usize)
    }

    /// For a 3-SAT clause (exactly one table entry equal to 1, the rest 0),
    /// its False assignment.
    pub fn sat_false_assignment(&self) -> Option<NegationMask> {
        if self.arity() != 3 {
            return None;
        }
        let ones: Vec<usize> = (0..8).filter(|&i| self.table[i] == 1).collect();
        let zeros = self.table.iter().filter(|&&v| v == 0).count();
        (ones.len() == 1 && zeros == 7).then(|| NegationMask {
            arity: 3,
            word: ones[0],
        })
    }

    /// The clause obtained by negating the masked bits: the new table at `x`
    /// is the old table at `x ^ mask`.
    pub fn negated(&self, mask: NegationMask) -> Result<Clause> {
        if mask.arity != self.arity() {
            return Err(Error::input("negation mask arity differs from clause arity"));
        }
        let table = (0..self.table.len())
            .map(|x| self.table[x ^ mask.word])
            .collect();
        Ok(Clause {
            bits: self.bits.clone(),
            table,
        })
    }
}

/// Looks up the clause value of an assignment.
pub fn eval_clause(clause: &Clause, a: &Assignment) -> Result<u64> {
    let max = *clause.bits.last().expect("clauses are nonempty");
    if a.len() <= max {
        return Err(Error::input(format!(
            "assignment of length {} does not cover clause bit {max}",
            a.len()
        )));
    }
    let idx = clause
        .bits
        .iter()
        .fold(0usize, |acc, &q| (acc << 1) | a.0[q] as usize);
    Ok(clause.table[idx])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    clauses: Vec<Clause>,
}

impl Instance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("instance needs at least one bit"));
        }
        if n >= 64 {
            return Err(Error::Capacity {
                what: "bit count",
                got: n,
                limit: 63,
            });
        }
        for (k, c) in clauses.iter().enumerate() {
            if let Some(&q) = c.bits.iter().find(|&&q| q >= n) {
                return Err(Error::input(format!(
                    "clause {k} references bit {q} of an {n}-bit instance"
                )));
            }
        }
        Ok(Instance { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Cost of the basis state with the given index.
    pub fn cost_of_index(&self, state: u64) -> u64 {
        self.clauses
            .iter()
            .map(|c| c.table[c.local_index(self.n, state)])
            .sum()
    }

    /// Negates the bits flagged in `global` in every clause.
    pub fn negate_bits(&self, global: &[bool]) -> Result<Instance> {
        if global.len() != self.n {
            return Err(Error::input("global negation mask length differs from n"));
        }
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                let word = c
                    .bits
                    .iter()
                    .fold(0usize, |acc, &q| (acc << 1) | global[q] as usize);
                c.negated(NegationMask {
                    arity: c.arity(),
                    word,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            n: self.n,
            clauses,
        })
    }
}

pub fn eval_cost(inst: &Instance, a: &Assignment) -> Result<u64> {
    if a.len() != inst.n {
        return Err(Error::input(format!(
            "assignment length {} differs from instance size {}",
            a.len(),
            inst.n
        )));
    }
    inst.clauses.iter().map(|c| eval_clause(c, a)).sum()
}

/// One clause with the symmetric `h_3` table on every ascending triple of bits.
pub fn build_symmetric_instance(n: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::input(format!(
            "symmetric instance needs n >= 3, got {n}"
        )));
    }
    let mut clauses = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                clauses.push(Clause::new(vec![i, j, k], SYMMETRIC_H3_TABLE.to_vec())?);
            }
        }
    }
    Instance::new(n, clauses)
}

/// A 3-SAT clause: value 1 on its False assignment, 0 elsewhere.
pub fn build_3sat_clause(bits: [usize; 3], false_assignment: NegationMask) -> Result<Clause> {
    if false_assignment.arity != 3 {
        return Err(Error::input("3-SAT False assignment must have three bits"));
    }
    let mut table = vec![0; 8];
    table[false_assignment.word] = 1;
    Clause::new(bits.to_vec(), table)
}

/// Exact Cover clause: penalty 1 unless exactly one of the three bits is set.
pub fn build_exact_cover_clause(bits: [usize; 3]) -> Result<Clause> {
    let table = (0..8u32)
        .map(|x| if x.count_ones() == 1 { 0 } else { 1 })
        .collect();
    Clause::new(bits.to_vec(), table)
}

/// Uniformly random 3-SAT instance with `m` distinct clauses (distinct as
/// (bit triple, False assignment) pairs).
pub fn random_3sat<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Instance> {
    if n < 3 {
        return Err(Error::input("3-SAT needs at least three bits"));
    }
    let triples = n * (n - 1) * (n - 2) / 6;
    if m > 8 * triples {
        return Err(Error::input(format!(
            "{m} distinct clauses requested but only {} exist on {n} bits",
            8 * triples
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let mut b = [0usize; 3];
        b[0] = rng.random_range(0..n);
        loop {
            b[1] = rng.random_range(0..n);
            if b[1] != b[0] {
                break;
            }
        }
        loop {
            b[2] = rng.random_range(0..n);
            if b[2] != b[0] && b[2] != b[1] {
                break;
            }
        }
        b.sort_unstable();
        let f = rng.random_range(0..8usize);
        if seen.insert((b, f)) {
            clauses.push(build_3sat_clause(b, NegationMask { arity: 3, word: f })?);
        }
    }
    Instance::new(n, clauses)
}

/// Exhaustive minimum of an instance's cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub n: usize,
    pub min: u64,
    /// Basis indices of all minimizers, ascending.
    pub argmin_indices: Vec<u64>,
}

impl BruteForce {
    pub fn argmins(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.argmin_indices
            .iter()
            .map(move |&i| Assignment::from_index(self.n, i))
    }
}

pub fn min_cost_bruteforce(inst: &Instance) -> Result<BruteForce> {
    if inst.n > BRUTE_FORCE_MAX_BITS {
        return Err(Error::Capacity {
            what: "brute-force bit count",
            got: inst.n,
            limit: BRUTE_FORCE_MAX_BITS,
        });
    }
    let mut min = u64::MAX;
    let mut argmin_indices = Vec::new();
    for state in 0..1u64 << inst.n {
        let c = inst.cost_of_index(state);
        if c < min {
            min = c;
            argmin_indices.clear();
        }
        if c == min {
            argmin_indices.push(state);
        }
    }
    Ok(BruteForce {
        n: inst.n,
        min,
        argmin_indices,
    })
}

/// Parses the line-oriented instance format:
///
/// ```text
/// # comment
/// n 5
/// clause 0 1 2 : 0 3 3 1 3 1 1 1
/// ```
///
/// `n=5` is accepted for the header as well.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut n: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("clause") {
            let nbits = n
                .ok_or_else(|| Error::parse(lineno, "clause before the `n` header"))?
                .0;
            let (lhs, rhs) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, "expected `:` between bits and table"))?;
            let bits = parse_list::<usize>(lhs, lineno, "bit index")?;
            let table = parse_list::<u64>(rhs, lineno, "table value")?;
            if let Some(&q) = bits.iter().find(|&&q| q >= nbits) {
                return Err(Error::parse(
                    lineno,
                    format!("bit index {q} out of range for n = {nbits}"),
                ));
            }
            let clause = Clause::new(bits, table).map_err(|e| match e {
                Error::Input(m) => Error::parse(lineno, m),
                other => other,
            })?;
            clauses.push(clause);
        } else if let Some(rest) = line.strip_prefix('n') {
            if n.is_some() {
                return Err(Error::parse(lineno, "duplicate `n` header"));
            }
            let v = rest.trim_start_matches(|c: char| c == '=' || c.is_whitespace());
            let v = v
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad bit count `{v}`")))?;
            n = Some((v, lineno));
        } else {
            return Err(Error::parse(lineno, format!("unrecognized line `{line}`")));
        }
    }
    let (n, line) = n.ok_or_else(|| Error::parse(1, "missing `n` header"))?;
    Instance::new(n, clauses).map_err(|e| match e {
        Error::Input(m) => Error::parse(line, m),
        other => other,
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::parse(line, format!("bad {what} `{t}`")))
        })
        .collect()
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = format!("n {}\n", inst.n);
    for c in &inst.clauses {
        out.push_str("clause");
        for q in &c.bits {
            out.push_str(&format!(" {q}"));
        }
        out.push_str(" :");
        for v in &c.table {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(bits: &[u8]) -> Assignment {
        Assignment::new(bits.to_vec()).unwrap()
    }

    fn h3_clause() -> Clause {
        Clause::new(vec![0, 1, 2], SYMMETRIC_H3_TABLE.to_vec()).unwrap()
    }

    #[test]
    fn h3_clause_values() {
        let c = h3_clause();
        assert_eq!(eval_clause(&c, &a(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(eval_clause(&c, &a(&[0, 0, 1])).unwrap(), 3);
        assert_eq!(eval_clause(&c, &a(&[1, 1, 0])).unwrap(), 1);
    }

    #[test]
    fn clause_out_of_range_assignment() {
        let c = Clause::new(vec![0, 4], vec![0, 1, 1, 0]).unwrap();
        assert!(matches!(eval_clause(&c, &a(&[0, 0, 0])), Err(Error::Input(_))));
    }

    #[test]
    fn symmetric_costs() {
        let i3 = build_symmetric_instance(3).unwrap();
        assert_eq!(eval_cost(&i3, &a(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(eval_cost(&i3, &a(&[1, 1, 1])).unwrap(), 1);
        let i4 = build_symmetric_instance(4).unwrap();
        assert_eq!(eval_cost(&i4, &a(&[1, 1, 1, 1])).unwrap(), 4);
        assert!(eval_cost(&i4, &a(&[1, 1, 1])).is_err());
    }

    #[test]
    fn symmetric_builder_shape() {
        let i3 = build_symmetric_instance(3).unwrap();
        assert_eq!(i3.clauses().len(), 1);
        assert_eq!(i3.clauses()[0].bits(), &[0, 1, 2]);
        assert_eq!(build_symmetric_instance(5).unwrap().clauses().len(), 10);
        let i4 = build_symmetric_instance(4).unwrap();
        for c in i4.clauses() {
            assert_eq!(c.table(), &[0, 3, 3, 1, 3, 1, 1, 1]);
        }
        assert!(build_symmetric_instance(2).is_err());
    }

    #[test]
    fn sat_clause_tables() {
        let c = build_3sat_clause([0, 1, 2], NegationMask::none(3)).unwrap();
        assert_eq!(c.table(), &[1, 0, 0, 0, 0, 0, 0, 0]);
        let c = build_3sat_clause([0, 1, 2], NegationMask::from_bits(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(c.table()[7], 1);
        for w in 0..8 {
            let c = build_3sat_clause([1, 3, 5], NegationMask::new(3, w).unwrap()).unwrap();
            assert_eq!(c.table().iter().sum::<u64>(), 1);
            assert_eq!(c.sat_false_assignment().unwrap().word(), w);
        }
        assert!(build_3sat_clause([2, 1, 0], NegationMask::none(3)).is_err());
    }

    #[test]
    fn exact_cover_clause_values() {
        let c = build_exact_cover_clause([0, 1, 2]).unwrap();
        assert_eq!(eval_clause(&c, &a(&[0, 0, 1])).unwrap(), 0);
        assert_eq!(eval_clause(&c, &a(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(eval_clause(&c, &a(&[1, 1, 1])).unwrap(), 1);
    }

    #[test]
    fn brute_force_examples() {
        let bf = min_cost_bruteforce(&build_symmetric_instance(4).unwrap()).unwrap();
        assert_eq!(bf.min, 0);
        assert_eq!(bf.argmins().collect::<Vec<_>>(), vec![Assignment::zeros(4)]);

        let one = Instance::new(
            3,
            vec![build_3sat_clause([0, 1, 2], NegationMask::none(3)).unwrap()],
        )
        .unwrap();
        let bf = min_cost_bruteforce(&one).unwrap();
        assert_eq!((bf.min, bf.argmin_indices.len()), (0, 7));

        let empty = Instance::new(5, vec![]).unwrap();
        let bf = min_cost_bruteforce(&empty).unwrap();
        assert_eq!((bf.min, bf.argmin_indices.len()), (0, 32));

        let big = Instance::new(25, vec![]).unwrap();
        assert!(matches!(min_cost_bruteforce(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn parse_examples() {
        let inst = parse_instance("n=3\nclause 0 1 2 : 0 3 3 1 3 1 1 1\n").unwrap();
        assert_eq!(inst.clauses().len(), 1);
        let inst = parse_instance("# header\nn 4   # bits\n\nclause 1 2 3 : 1 0 0 0 0 0 0 0\n").unwrap();
        assert_eq!(inst.n(), 4);

        let dup = parse_instance("n 3\nclause 0 0 2 : 0 0 0 0 0 0 0 0\n");
        assert!(matches!(dup, Err(Error::Parse { line: 2, .. })), "{dup:?}");
        let short = parse_instance("n 3\nclause 0 1 2 : 0 0 0\n");
        assert!(matches!(short, Err(Error::Parse { line: 2, .. })));
        let range = parse_instance("n 3\n\nclause 0 1 3 : 0 0 0 0 0 0 0 0\n");
        assert!(matches!(range, Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_instance("clause 0 1 2 : 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_instance("n 3\nfoo\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn symmetric_round_trip() {
        let inst = build_symmetric_instance(5).unwrap();
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn index_convention() {
        let x = Assignment::from_index(4, 0b1000);
        assert_eq!(x.bits(), &[1, 0, 0, 0]);
        assert_eq!(x.to_index(), 8);
    }

    proptest! {
        #[test]
        fn cost_is_sum_of_clauses(seed in any::<u64>(), m in 0usize..30, state in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 7;
            let inst = random_3sat(n, m, &mut rng).unwrap();
            let z = Assignment::from_index(n, state & 0x7f);
            let direct: u64 = inst.clauses().iter().map(|c| eval_clause(c, &z).unwrap()).sum();
            prop_assert_eq!(eval_cost(&inst, &z).unwrap(), direct);
            prop_assert_eq!(inst.cost_of_index(z.to_index()), direct);
            // number of violated clauses
            let violated = inst.clauses().iter().filter(|c| {
                let f = c.sat_false_assignment().unwrap().word();
                let sub: usize = c.bits().iter().fold(0, |acc, &q| (acc << 1) | z.bits()[q] as usize);
                sub == f
            }).count() as u64;
            prop_assert_eq!(direct, violated);
        }

        #[test]
        fn symmetric_cost_depends_on_weight_only(n in 3usize..9, s1 in any::<u64>(), s2 in any::<u64>()) {
            let inst = build_symmetric_instance(n).unwrap();
            let mask = (1u64 << n) - 1;
            let (x, y) = (s1 & mask, s2 & mask);
            if x.count_ones() == y.count_ones() {
                prop_assert_eq!(inst.cost_of_index(x), inst.cost_of_index(y));
            }
            let w = x.count_ones() as u64;
            let y = (1u64 << w) - 1;
            prop_assert_eq!(inst.cost_of_index(x), inst.cost_of_index(y));
        }

        #[test]
        fn parse_serialize_round_trip(seed in any::<u64>(), n in 3usize..12, m in 0usize..20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = m.min(8 * n * (n - 1) * (n - 2) / 6);
            let inst = random_3sat(n, m, &mut rng).unwrap();
            prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
        }
    }
}

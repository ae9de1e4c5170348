//! Finite groups as multiplication tables.
//!
//! Elements are the integers `0..order`; labels are cosmetic. Subgroups are
//! returned as sorted index sets, and [`FiniteGroup::restrict`] builds a table
//! for one when needed.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Orders up to this bound get an exhaustive O(m^3) associativity check.
pub const EXHAUSTIVE_VALIDATION_MAX: usize = 256;
/// Largest `n` accepted by [`FiniteGroup::symmetric`] (|S_7|^2 table entries).
pub const SYMMETRIC_MAX: usize = 7;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Exhaustive,
    /// Associativity checked on a seeded random sample of triples only.
    Sampled { triples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
    validation: Validation,
}

impl FiniteGroup {
    /// Z_n with `i * j = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        let mul = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
        Self::from_flat(n, mul, Some((0..n).map(|i| i.to_string()).collect()))
    }

    /// D_n of order 2n: indices `0..n` are `r^k`, indices `n..2n` are `s r^k`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        // r^a s = s r^{-a}
        let split = |x: usize| if x < n { (false, x) } else { (true, x - n) };
        let m = 2 * n;
        let mut mul = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let (xs, a) = split(x);
                let (ys, b) = split(y);
                let k = if ys { (n - a + b) % n } else { (a + b) % n };
                let flip = xs ^ ys;
                mul.push((if flip { n + k } else { k }) as u32);
            }
        }
        let power = |k: usize| match k {
            0 => String::new(),
            1 => "r".to_string(),
            _ => format!("r^{k}"),
        };
        let labels = (0..m)
            .map(|x| {
                let (s, k) = split(x);
                match (s, k) {
                    (false, 0) => "e".to_string(),
                    (false, k) => power(k),
                    (true, k) => format!("s{}", power(k)),
                }
            })
            .collect();
        Self::from_flat(m, mul, Some(labels))
    }

    /// S_n over permutations of `0..n` in lexicographic order of their image
    /// lists, with `(sigma tau)(i) = sigma(tau(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        if n > SYMMETRIC_MAX {
            return Err(Error::TableTooLarge { n, max: SYMMETRIC_MAX });
        }
        let perms = permutations_lex(n);
        let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(k, p)| (p.as_slice(), k)).collect();
        let m = perms.len();
        let mut mul = Vec::with_capacity(m * m);
        let mut buf = vec![0usize; n];
        for sigma in &perms {
            for tau in &perms {
                for i in 0..n {
                    buf[i] = sigma[tau[i]];
                }
                mul.push(index[buf.as_slice()] as u32);
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(m, mul, Some(labels))
    }

    /// Direct product; element `(g, h)` has index `g * |H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (a, b) = (g.order, h.order);
        let m = a * b;
        let mut mul = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let gi = g.mul(x / b, y / b);
                let hi = h.mul(x % b, y % b);
                mul.push((gi * b + hi) as u32);
            }
        }
        let labels = (0..m).map(|x| format!("({},{})", g.label(x / b), h.label(x % b))).collect();
        Self::from_flat(m, mul, Some(labels))
    }

    /// Validates the group axioms of a user-supplied table and derives the
    /// identity and inverse tables.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let mut mul = Vec::with_capacity(m * m);
        for (i, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape(format!("table row {i} has length {}, expected {m}", row.len())));
            }
            for &x in row {
                if x >= m {
                    return Err(Error::InvalidElement { index: x, order: m });
                }
                mul.push(x as u32);
            }
        }
        Self::from_flat(m, mul, None)
    }

    fn from_flat(order: usize, mul: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|s| at(e, s) == s && at(s, e) == s))
            .ok_or(Error::AxiomViolation { axiom: "identity", witness: Vec::new() })?;
        let mut inv = Vec::with_capacity(order);
        for s in 0..order {
            let t = (0..order)
                .find(|&t| at(s, t) == identity && at(t, s) == identity)
                .ok_or(Error::AxiomViolation { axiom: "inverse", witness: vec![s] })?;
            inv.push(t);
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        let validation = if order <= EXHAUSTIVE_VALIDATION_MAX {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(Error::AxiomViolation { axiom: "associativity", witness: vec![a, b, c] });
                        }
                    }
                }
            }
            Validation::Exhaustive
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.random_range(0..order), rng.random_range(0..order), rng.random_range(0..order));
                if !assoc(a, b, c) {
                    return Err(Error::AxiomViolation { axiom: "associativity", witness: vec![a, b, c] });
                }
            }
            Validation::Sampled { triples: SAMPLED_TRIPLES }
        };
        Ok(Self { order, mul, inv, identity, labels, validation })
    }

    /// Same order and multiplication table; labels are ignored.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.mul == other.mul
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Shape(format!("{} labels for a group of order {}", labels.len(), self.order)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a >= self.order {
            return Err(Error::InvalidElement { index: a, order: self.order });
        }
        Ok(())
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, by breadth-first right
    /// multiplication from the identity.
    pub fn closure(&self, gens: &[usize]) -> Result<Vec<usize>> {
        for &g in gens {
            self.check_element(g)?;
        }
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok((0..self.order).filter(|&x| seen[x]).collect())
    }

    /// `[G, G] = < s t s^-1 t^-1 >`.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let gens: BTreeSet<usize> = self
            .elements()
            .flat_map(|s| self.elements().map(move |t| (s, t)))
            .map(|(s, t)| self.mul(self.mul(s, t), self.mul(self.inv(s), self.inv(t))))
            .collect();
        let gens: Vec<usize> = gens.into_iter().collect();
        self.closure(&gens).expect("commutators are group elements")
    }

    /// `G_n = < s^{-(n-1)} (ts)^{n-1} t^{-(n-1)} >`.
    pub fn power_subgroup(&self, n: usize) -> Result<Vec<usize>> {
        if n == 0 {
            return Err(Error::Domain("power subgroup needs n >= 1".into()));
        }
        let k = (n - 1) as i64;
        let mut gens = BTreeSet::new();
        for s in self.elements() {
            for t in self.elements() {
                let w = self.mul(self.mul(self.pow(s, -k), self.pow(self.mul(t, s), k)), self.pow(t, -k));
                gens.insert(w);
            }
        }
        let gens: Vec<usize> = gens.into_iter().collect();
        self.closure(&gens)
    }

    /// Builds the table of a subgroup given as an index set; the i-th smallest
    /// index becomes element `i`.
    pub fn restrict(&self, subset: &[usize]) -> Result<FiniteGroup> {
        let mut elems: Vec<usize> = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        for &e in &elems {
            self.check_element(e)?;
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elems.len();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &elems {
            for &b in &elems {
                let p = self.mul(a, b);
                let idx = pos
                    .get(&p)
                    .ok_or_else(|| Error::Precondition(format!("subset is not closed: {a}*{b} = {p}")))?;
                mul.push(*idx as u32);
            }
        }
        let labels = elems.iter().map(|&e| self.label(e)).collect();
        Self::from_flat(m, mul, Some(labels))
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Parity of a permutation: `true` when even.
pub fn is_even_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len: usize = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2 == 0
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "(1)".to_string()
    } else {
        out
    }
}

/// A map between element indices of two groups.
#[derive(Debug, Clone)]
pub struct GroupMorphism {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub homomorphism: bool,
    /// First pair `(s, t)` with `phi(st) != phi(s) phi(t)`.
    pub witness: Option<(usize, usize)>,
    pub injective: bool,
    pub surjective: bool,
}

impl MorphismReport {
    pub fn is_isomorphism(&self) -> bool {
        self.homomorphism && self.injective && self.surjective
    }
}

impl GroupMorphism {
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::Shape(format!("map has {} entries for a source of order {}", map.len(), source.order())));
        }
        for &x in &map {
            target.check_element(x)?;
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self { source: g.clone(), target: g.clone(), map: g.elements().collect() }
    }

    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    pub fn validate(&self) -> MorphismReport {
        let (g, h) = (&self.source, &self.target);
        let witness = g
            .elements()
            .flat_map(|s| g.elements().map(move |t| (s, t)))
            .find(|&(s, t)| self.map[g.mul(s, t)] != h.mul(self.map[s], self.map[t]));
        let image: BTreeSet<usize> = self.map.iter().copied().collect();
        MorphismReport {
            homomorphism: witness.is_none(),
            witness,
            injective: image.len() == g.order(),
            surjective: image.len() == h.order(),
        }
    }

    /// Errors with the witness pair unless the map is a homomorphism.
    pub fn ensure_homomorphism(&self) -> Result<MorphismReport> {
        let report = self.validate();
        match report.witness {
            Some((s, t)) => Err(Error::NotHomomorphism { s, t }),
            None => Ok(report),
        }
    }
}

/// Greedy generating set: adds each element not yet in the generated subgroup.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![g.identity()];
    for s in g.elements() {
        if span.binary_search(&s).is_err() {
            gens.push(s);
            span = g.closure(&gens).expect("valid elements");
        }
    }
    gens
}

/// Brute-force isomorphism search over images of a generating set. Intended
/// for small orders only.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<GroupMorphism> {
    if g.order() != h.order() {
        return None;
    }
    let gens = generating_set(g);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| h.elements().filter(|&y| h.element_order(y) == g.element_order(x)).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&k, c)| c[k]).collect();
        if let Some(map) = extend_on_generators(g, h, &gens, &images) {
            let phi = GroupMorphism { source: g.clone(), target: h.clone(), map };
            if phi.validate().is_isomorphism() {
                return Some(phi);
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_on_generators(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[g.identity()] = h.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    map.iter().all(|&x| x != usize::MAX).then_some(map)
}

//! Permutations and finite permutation groups backed by a base and strong
//! generating set (deterministic Schreier-Sims).

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image array is not a bijection")]
    NotABijection,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    Infeasible { order: BigUint, cap: u64 },
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotABijection);
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Least `m >= 1` with `self^m = 1`.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

/// Least `m >= 1` with `σ^m = 1`.
pub fn element_order(sigma: &Permutation) -> u64 {
    sigma.order()
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation of a group order as `(p, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Vec<(u64, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while !n.is_one() && !n.is_zero() {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            let last = n.to_u64().expect("remaining prime factor fits in u64");
            out.push((last, 1));
            break;
        }
        let mut k = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[x] = u` with `u(base_point) = x`, plus its inverse.
    transversal: Vec<Option<(Permutation, Permutation)>>,
    /// For `orbit[k]`, the number of generators whose Schreier generator
    /// has already been sifted.
    checked: Vec<usize>,
}

impl Level {
    fn new(n: usize, base_point: usize) -> Self {
        let mut transversal = vec![None; n];
        let id = Permutation::identity(n);
        transversal[base_point] = Some((id.clone(), id));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            checked: vec![0],
        }
    }

    fn extend_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let u = s.compose(&self.transversal[x].as_ref().unwrap().0);
                    let inv = u.inverse();
                    self.transversal[y] = Some((u, inv));
                    self.orbit.push(y);
                    self.checked.push(0);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    fn build(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        let mut top = Level::new(degree, gens[0].first_moved_point().unwrap());
        top.gens = gens;
        top.extend_orbit();
        chain.levels.push(top);

        let mut i = 0usize;
        loop {
            match chain.next_unchecked_residue(i) {
                Some((residue, j)) => {
                    if j == chain.levels.len() {
                        let bp = residue.first_moved_point().unwrap();
                        chain.levels.push(Level::new(degree, bp));
                    }
                    for k in i + 1..=j {
                        chain.levels[k].gens.push(residue.clone());
                        chain.levels[k].extend_orbit();
                    }
                    i = j;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
        chain
    }

    /// Sifts pending Schreier generators of level `i`; returns the first
    /// non-trivial residue and the level where it fell out.
    fn next_unchecked_residue(&mut self, i: usize) -> Option<(Permutation, usize)> {
        let mut k = 0;
        while k < self.levels[i].orbit.len() {
            while self.levels[i].checked[k] < self.levels[i].gens.len() {
                let level = &self.levels[i];
                let x = level.orbit[k];
                let s = &level.gens[level.checked[k]];
                let sx = s.apply(x);
                let u_x = &level.transversal[x].as_ref().unwrap().0;
                let u_sx_inv = &level.transversal[sx].as_ref().unwrap().1;
                let schreier = u_sx_inv.compose(&s.compose(u_x));
                self.levels[i].checked[k] += 1;
                let (residue, j) = self.sift_from(schreier, i + 1);
                if !residue.is_identity() {
                    return Some((residue, j));
                }
            }
            k += 1;
        }
        None
    }

    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let x = g.apply(level.base_point);
            match &level.transversal[x] {
                Some((_, inv)) => g = inv.compose(&g),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let x = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.compose(&level.transversal[x].as_ref().unwrap().0);
        }
        g
    }

    fn for_each_element(&self, f: &mut impl FnMut(&Permutation)) {
        fn rec(
            levels: &[Level],
            depth: usize,
            acc: &Permutation,
            f: &mut impl FnMut(&Permutation),
        ) {
            if depth == levels.len() {
                f(acc);
                return;
            }
            for &x in &levels[depth].orbit {
                let u = &levels[depth].transversal[x].as_ref().unwrap().0;
                rec(levels, depth + 1, &acc.compose(u), f);
            }
        }
        rec(&self.levels, 0, &Permutation::identity(self.degree), f);
    }
}

/// A permutation group given by generators. The stabilizer chain is built
/// on first use and cached (thread-safe).
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

/// Result of [`PermutationGroup::enumerate_elements`].
#[derive(Debug, Clone)]
pub enum Enumeration {
    Elements(Vec<Permutation>),
    Overflow { order: BigUint },
}

/// Cyclic subgroups found by a scan, one generator per subgroup.
#[derive(Debug, Clone)]
pub struct CyclicScan {
    pub subgroups: Vec<(Permutation, u64)>,
    /// True when the group was enumerated and every cyclic subgroup is listed.
    pub complete: bool,
}

/// Number of extra random elements tried by a cyclic scan of a group too
/// large to enumerate.
pub const DEFAULT_WORD_BUDGET: usize = 2000;

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Self {
        assert!(
            generators.iter().all(|g| g.degree() == degree),
            "generators must act on a common point set"
        );
        PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        self.chain().random_element(rng)
    }

    /// All elements if `|G| <= cap`, otherwise `Overflow` carrying `|G|`.
    pub fn enumerate_elements(&self, cap: u64) -> Enumeration {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Enumeration::Overflow { order };
        }
        let mut out = Vec::with_capacity(order.to_usize().unwrap_or(0));
        self.chain().for_each_element(&mut |g| out.push(g.clone()));
        Enumeration::Elements(out)
    }

    /// Orbits of the points `0..degree`, each sorted, listed by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            label[start] = id;
            let mut orbit = vec![start];
            let mut k = 0;
            while k < orbit.len() {
                let x = orbit[k];
                for g in &self.generators {
                    let y = g.apply(x);
                    if label[y] == usize::MAX {
                        label[y] = id;
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// One generator per cyclic subgroup. Exhaustive when `|G| <= cap`;
    /// otherwise tries the generators, their pairwise products and
    /// `word_budget` seeded random elements.
    pub fn cyclic_subgroups(&self, cap: u64, word_budget: usize, seed: u64) -> CyclicScan {
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut subgroups = Vec::new();
        let mut consider = |x: Permutation, seen: &mut HashSet<Permutation>| {
            if seen.contains(&x) {
                return;
            }
            let m = x.order();
            let mut power = Permutation::identity(x.degree());
            for k in 1..=m {
                power = power.compose(&x);
                if k.gcd(&m) == 1 {
                    seen.insert(power.clone());
                }
            }
            subgroups.push((x, m));
        };
        match self.enumerate_elements(cap) {
            Enumeration::Elements(all) => {
                for x in all {
                    consider(x, &mut seen);
                }
                CyclicScan {
                    subgroups,
                    complete: true,
                }
            }
            Enumeration::Overflow { .. } => {
                consider(Permutation::identity(self.degree), &mut seen);
                for g in &self.generators {
                    consider(g.clone(), &mut seen);
                }
                for a in &self.generators {
                    for b in &self.generators {
                        consider(a.compose(b), &mut seen);
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..word_budget {
                    let x = self.random_element(&mut rng);
                    consider(x, &mut seen);
                }
                CyclicScan {
                    subgroups,
                    complete: false,
                }
            }
        }
    }

    /// A Sylow `p`-subgroup, grown from enumerated `p`-elements: a `p`-element
    /// outside the current subgroup `P` that normalises `P` always exists
    /// until `P` is Sylow, so the search terminates.
    pub fn sylow_subgroup(&self, p: u64, cap: u64, seed: u64) -> Result<PermutationGroup, PermError> {
        if !is_prime(p) {
            return Err(PermError::NotPrime(p));
        }
        let order = self.order();
        let target = p_part(&order, p);
        if target.is_one() {
            return Ok(PermutationGroup::trivial(self.degree));
        }
        let elements = match self.enumerate_elements(cap) {
            Enumeration::Elements(e) => e,
            Enumeration::Overflow { order } => return Err(PermError::Infeasible { order, cap }),
        };
        let mut p_elements: Vec<Permutation> = elements
            .into_iter()
            .filter(|x| !x.is_identity() && is_power_of(x.order(), p))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
        p_elements.shuffle(&mut rng);

        let mut current = PermutationGroup::trivial(self.degree);
        while current.order() != target {
            let mut grew = false;
            for x in &p_elements {
                if current.contains(x) {
                    continue;
                }
                let x_inv = x.inverse();
                let normalizes = current
                    .generators
                    .iter()
                    .all(|h| current.contains(&x.compose(h).compose(&x_inv)));
                if normalizes {
                    let mut gens = current.generators.clone();
                    gens.push(x.clone());
                    current = PermutationGroup::new(self.degree, gens);
                    grew = true;
                    if current.order() == target {
                        break;
                    }
                }
            }
            assert!(grew, "p-subgroup growth stalled below the Sylow order");
        }
        Ok(current)
    }
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.contains(g))
    }
}

pub fn p_part(n: &BigUint, p: u64) -> BigUint {
    let bp = BigUint::from(p);
    let mut n = n.clone();
    let mut out = BigUint::one();
    while !n.is_zero() && (&n % &bp).is_zero() {
        n /= &bp;
        out *= &bp;
    }
    out
}

fn is_power_of(mut m: u64, p: u64) -> bool {
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

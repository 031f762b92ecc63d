//! Root-system and Weyl-group arithmetic for a semisimple Lie algebra given
//! by Cartan type, plus the Freudenthal multiplicity oracle and the Weyl
//! dimension formula.
//!
//! Weights are stored exclusively in fundamental-weight coordinates: the
//! coordinate at node `i` is the pairing with the simple coroot `i`. Row `i`
//! of the Cartan matrix is then the coordinate vector of the simple root
//! `alpha_i`. All arithmetic is exact; the invariant bilinear form is scaled
//! by a positive integer so that it takes integer values.

// Dense matrix arithmetic below reads better with plain index loops.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Integer weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Sequence of simple-reflection indices (0-based), kept unreduced.
///
/// A word `[i, j, k]` acts as the composition `s_i ∘ s_j ∘ s_k`: the last
/// index is applied first. Equality of group elements is tested by action on
/// a regular weight, never by word comparison.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A semisimple Lie algebra presented by its Cartan matrix.
///
/// Derived data (positive roots, symmetrizer, the adjugate used for exact
/// root-coordinate conversion) is computed once at construction; values are
/// immutable afterwards.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CartanData {
    name: String,
    matrix: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    det: i128,
    adj_t: Vec<Vec<i128>>,
    positive_roots: Vec<Weight>,
    positive_root_coords: Vec<Vec<i64>>,
}

impl CartanData {
    /// Simple algebra of the given series letter and rank.
    pub fn series(letter: char, rank: usize) -> Result<CartanData> {
        let bad = |msg: &str| Error::InvalidCartan(msg.to_string());
        if rank == 0 {
            return Err(bad("rank must be positive"));
        }
        let mut m = vec![vec![0i64; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |m: &mut Vec<Vec<i64>>, a: usize, b: usize| {
            m[a][b] = -1;
            m[b][a] = -1;
        };
        match letter.to_ascii_uppercase() {
            'A' => {
                for i in 0..rank - 1 {
                    chain(&mut m, i, i + 1);
                }
            }
            'B' if rank >= 2 => {
                for i in 0..rank - 1 {
                    chain(&mut m, i, i + 1);
                }
                m[rank - 2][rank - 1] = -2;
            }
            'C' if rank >= 2 => {
                for i in 0..rank - 1 {
                    chain(&mut m, i, i + 1);
                }
                m[rank - 1][rank - 2] = -2;
            }
            'D' if rank >= 3 => {
                for i in 0..rank - 2 {
                    chain(&mut m, i, i + 1);
                }
                chain(&mut m, rank - 3, rank - 1);
            }
            'E' if (6..=8).contains(&rank) => {
                // Bourbaki numbering: node 2 hangs off node 4 of the chain
                // 1-3-4-5-..-rank.
                chain(&mut m, 0, 2);
                chain(&mut m, 1, 3);
                for i in 2..rank - 1 {
                    chain(&mut m, i, i + 1);
                }
            }
            'F' if rank == 4 => {
                chain(&mut m, 0, 1);
                chain(&mut m, 2, 3);
                m[1][2] = -2;
                m[2][1] = -1;
            }
            'G' if rank == 2 => {
                m[0][1] = -1;
                m[1][0] = -3;
            }
            _ => return Err(bad(&format!("unsupported type {letter}{rank}"))),
        }
        let mut data = CartanData::from_matrix(m)?;
        data.name = format!("{}{}", letter.to_ascii_uppercase(), rank);
        Ok(data)
    }

    /// Parse a descriptor like "A3" or "D4".
    pub fn parse(descriptor: &str) -> Result<CartanData> {
        let bad = || Error::InvalidCartan(format!("cannot parse Cartan type {descriptor:?}"));
        let mut chars = descriptor.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanData::series(letter, rank)
    }

    /// Validate an explicit generalized Cartan matrix of finite type.
    ///
    /// Row `i` is read as the fundamental-weight coordinate vector of the
    /// simple root `alpha_i`.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<CartanData> {
        let bad = |msg: String| Error::InvalidCartan(msg);
        let rank = matrix.len();
        if rank == 0 {
            // Rank zero is the torus; permitted so that fully crossed
            // markings have a Levi.
            return Ok(CartanData {
                name: "T".to_string(),
                matrix,
                symmetrizer: Vec::new(),
                det: 1,
                adj_t: Vec::new(),
                positive_roots: Vec::new(),
                positive_root_coords: Vec::new(),
            });
        }
        for row in &matrix {
            if row.len() != rank {
                return Err(bad("matrix is not square".into()));
            }
        }
        for i in 0..rank {
            if matrix[i][i] != 2 {
                return Err(bad(format!("diagonal entry at node {i} is not 2")));
            }
            for j in 0..rank {
                if i != j {
                    if matrix[i][j] > 0 {
                        return Err(bad(format!("positive off-diagonal entry at ({i},{j})")));
                    }
                    if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                        return Err(bad(format!("asymmetric zero pattern at ({i},{j})")));
                    }
                }
            }
        }
        let symmetrizer = symmetrize(&matrix).ok_or_else(|| bad("not symmetrizable".into()))?;
        // Finite type: the symmetrized matrix (alpha_i, alpha_j) must be
        // positive definite.
        let gram: Vec<Vec<i128>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| matrix[i][j] as i128 * symmetrizer[j] as i128)
                    .collect()
            })
            .collect();
        for k in 1..=rank {
            let minor: Vec<Vec<i128>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if determinant(&minor) <= 0 {
                return Err(bad("symmetrized matrix is not positive definite".into()));
            }
        }
        let m_t: Vec<Vec<i128>> = (0..rank)
            .map(|i| (0..rank).map(|j| matrix[j][i] as i128).collect())
            .collect();
        let det = determinant(&m_t);
        let adj_t = adjugate(&m_t);
        let (positive_root_coords, positive_roots) = enumerate_positive_roots(&matrix);
        Ok(CartanData {
            name: format!("rank-{rank}"),
            matrix,
            symmetrizer,
            det,
            adj_t,
            positive_roots,
            positive_root_coords,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Fundamental-weight coordinates of `alpha_i` (row `i` of the matrix).
    pub fn simple_root(&self, i: usize) -> Result<Weight> {
        self.check_node(i)?;
        Ok(Weight::new(self.matrix[i].clone()))
    }

    /// Half the sum of positive roots: the all-ones weight.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Simple-root expansion coefficients of `positive_roots()`, in the same
    /// order.
    pub fn positive_root_coords(&self) -> &[Vec<i64>] {
        &self.positive_root_coords
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                got: w.rank(),
                expected: self.rank(),
            })
        }
    }

    /// Simple reflection `s_i(w) = w - w_i * alpha_i`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Result<Weight> {
        self.check_node(i)?;
        self.check_weight(w)?;
        let c = w.coord(i);
        let mut out = w.clone();
        for j in 0..self.rank() {
            out.0[j] -= c * self.matrix[i][j];
        }
        Ok(out)
    }

    /// Linear action of a Weyl word; the last letter acts first.
    pub fn apply_word(&self, word: &WeylWord, w: &Weight) -> Result<Weight> {
        let mut out = w.clone();
        for &i in word.0.iter().rev() {
            out = self.reflect(i, &out)?;
        }
        Ok(out)
    }

    /// Affine (dot) action `w.λ = w(λ+ρ) − ρ`.
    pub fn affine_act(&self, word: &WeylWord, w: &Weight) -> Result<Weight> {
        let shifted = w.add(&self.rho());
        Ok(self.apply_word(word, &shifted)?.sub(&self.rho()))
    }

    /// Exact expansion of `w` in simple roots, if `w` lies in the root
    /// lattice.
    pub fn expand_in_simple_roots(&self, w: &Weight) -> Option<Vec<i64>> {
        if w.rank() != self.rank() {
            return None;
        }
        if self.rank() == 0 {
            return Some(Vec::new());
        }
        // Solve y^T M = x^T, i.e. (M^T) y = x, via the precomputed adjugate.
        let mut out = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let mut v: i128 = 0;
            for j in 0..self.rank() {
                v += self.adj_t[i][j] * w.coord(j) as i128;
            }
            if v % self.det != 0 {
                return None;
            }
            out.push((v / self.det) as i64);
        }
        Some(out)
    }

    /// Invariant bilinear form, scaled by a fixed positive integer.
    pub fn inner(&self, a: &Weight, b: &Weight) -> i128 {
        // <a, b> = y_a^T G y_b with y the (det-scaled) root coordinates and
        // G[k][l] = M[k][l] * d_l the symmetrized matrix. The det^2 scale is
        // harmless: every use compares or divides two such values.
        let n = self.rank();
        if n == 0 {
            return 0;
        }
        let ya = self.scaled_root_coords(a);
        let yb = self.scaled_root_coords(b);
        let mut total: i128 = 0;
        for k in 0..n {
            for l in 0..n {
                total += ya[k] * self.matrix[k][l] as i128 * self.symmetrizer[l] as i128 * yb[l];
            }
        }
        total
    }

    fn scaled_root_coords(&self, w: &Weight) -> Vec<i128> {
        let n = self.rank();
        let mut y = vec![0i128; n];
        for (i, yi) in y.iter_mut().enumerate() {
            for j in 0..n {
                *yi += self.adj_t[i][j] * w.coord(j) as i128;
            }
            // Keep the det sign out of the quadratic form.
            if self.det < 0 {
                *yi = -*yi;
            }
        }
        y
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        w.coords().iter().all(|&c| c >= 0)
    }

    /// Full weight diagram of the irreducible with highest weight `hw`,
    /// computed by the Freudenthal recursion.
    pub fn weight_multiplicities(&self, hw: &Weight) -> Result<BTreeMap<Weight, u64>> {
        self.check_weight(hw)?;
        if !self.is_dominant(hw) {
            return Err(Error::NotDominant(hw.to_string()));
        }
        let mut all: BTreeMap<Weight, u64> = BTreeMap::new();
        all.insert(hw.clone(), 1);
        if self.rank() == 0 {
            return Ok(all);
        }
        let rho = self.rho();
        let hw_shift = hw.add(&rho);
        let norm_top = self.inner(&hw_shift, &hw_shift);
        let mut level: Vec<Weight> = vec![hw.clone()];
        while !level.is_empty() {
            let mut candidates: BTreeSet<Weight> = BTreeSet::new();
            for w in &level {
                for i in 0..self.rank() {
                    candidates.insert(w.sub(&Weight::new(self.matrix[i].clone())));
                }
            }
            let mut next = Vec::new();
            for mu in candidates {
                let mu_shift = mu.add(&rho);
                let den = norm_top - self.inner(&mu_shift, &mu_shift);
                if den <= 0 {
                    continue;
                }
                let mut num: i128 = 0;
                for alpha in &self.positive_roots {
                    let mut k = 1i64;
                    loop {
                        let up = mu.add(&alpha.scaled(k));
                        match all.get(&up) {
                            Some(&m) => num += 2 * m as i128 * self.inner(&up, alpha),
                            None => break,
                        }
                        k += 1;
                    }
                }
                if num <= 0 {
                    continue;
                }
                debug_assert!(num % den == 0, "Freudenthal division must be exact");
                let m = (num / den) as u64;
                all.insert(mu.clone(), m);
                next.push(mu);
            }
            level = next;
        }
        Ok(all)
    }

    /// Dimension of the irreducible with highest weight `hw`, by the Weyl
    /// product formula.
    pub fn weyl_dimension(&self, hw: &Weight) -> Result<u128> {
        self.check_weight(hw)?;
        if !self.is_dominant(hw) {
            return Err(Error::NotDominant(hw.to_string()));
        }
        let rho = self.rho();
        let shifted = hw.add(&rho);
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for alpha in &self.positive_roots {
            num *= self.inner(&shifted, alpha);
            den *= self.inner(&rho, alpha);
            let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
            num /= g;
            den /= g;
        }
        debug_assert_eq!(den.abs(), 1);
        Ok((num / den) as u128)
    }

    /// Orbit of a weight under the full Weyl group.
    pub fn weyl_orbit(&self, w: &Weight) -> Result<Vec<Weight>> {
        self.check_weight(w)?;
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        let mut queue = VecDeque::from([w.clone()]);
        seen.insert(w.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                let r = self.reflect(i, &v)?;
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// Smallest positive integers `d` with `d_i M[i][j] = d_j M[j][i]`.
fn symmetrize(matrix: &[Vec<i64>]) -> Option<Vec<i64>> {
    let rank = matrix.len();
    // Assign rational ratios along the Dynkin graph, then clear denominators.
    let mut num = vec![0i64; rank];
    let mut den = vec![0i64; rank];
    for start in 0..rank {
        if num[start] != 0 {
            continue;
        }
        num[start] = 1;
        den[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..rank {
                if i == j || matrix[i][j] == 0 {
                    continue;
                }
                // Symmetry of (alpha_i, alpha_j) forces d_j/d_i = M[j][i]/M[i][j].
                let (nj, dj) = (num[i] * matrix[j][i], den[i] * matrix[i][j]);
                let g = gcd(nj.unsigned_abs() as u128, dj.unsigned_abs() as u128) as i64;
                let (nj, dj) = (nj.abs() / g, dj.abs() / g);
                if num[j] == 0 {
                    num[j] = nj;
                    den[j] = dj;
                    queue.push_back(j);
                } else if num[j] * dj != nj * den[j] {
                    return None;
                }
            }
        }
    }
    let lcm_den = den.iter().fold(1i64, |acc, &d| {
        acc / gcd(acc.unsigned_abs() as u128, d.unsigned_abs() as u128) as i64 * d
    });
    let mut d: Vec<i64> = (0..rank).map(|i| num[i] * (lcm_den / den[i])).collect();
    let g = d
        .iter()
        .fold(0u128, |acc, &x| gcd(acc, x.unsigned_abs() as u128)) as i64;
    for x in &mut d {
        *x /= g;
    }
    Some(d)
}

/// All positive roots, by reflection closure of the simple roots; returns
/// root-lattice coordinates alongside the fundamental-weight form.
fn enumerate_positive_roots(matrix: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Weight>) {
    let rank = matrix.len();
    let rows: Vec<Weight> = matrix.iter().map(|r| Weight::new(r.clone())).collect();
    // Track root-lattice coordinates alongside to test positivity.
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut out: Vec<(Vec<i64>, Weight)> = Vec::new();
    let mut queue: VecDeque<(Vec<i64>, Weight)> = VecDeque::new();
    for i in 0..rank {
        let mut coords = vec![0i64; rank];
        coords[i] = 1;
        if seen.insert(coords.clone()) {
            queue.push_back((coords.clone(), rows[i].clone()));
            out.push((coords, rows[i].clone()));
        }
    }
    while let Some((coords, fw)) = queue.pop_front() {
        for i in 0..rank {
            let c = fw.coord(i);
            let mut rc = coords.clone();
            rc[i] -= c;
            if rc.iter().all(|&x| x >= 0) && rc.iter().any(|&x| x > 0) {
                let rfw = fw.sub(&rows[i].scaled(c));
                if seen.insert(rc.clone()) {
                    queue.push_back((rc.clone(), rfw.clone()));
                    out.push((rc, rfw));
                }
            }
        }
    }
    // Sort by height then lexicographically, for reproducible iteration.
    out.sort_by_key(|(rc, fw)| (rc.iter().sum::<i64>(), fw.clone()));
    out.into_iter().unzip()
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i128;
    for (j, &top) in m[0].iter().enumerate() {
        if top == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(k, &v)| (k != j).then_some(v))
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * top * determinant(&minor);
    }
    det
}

fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c])
                        .collect::<Vec<_>>()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * determinant(&minor);
        }
    }
    adj
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

//! Eichler transvections and constructive orbit moves on U ⊕ U(2) ⊕ A1(−1)^m.

use crate::arith::{egcd, gcd, Q};
use crate::discriminant::{DiscriminantForm, Elt};
use crate::error::{Error, Result};
use crate::lattice::{eichler_lattice, EvenLattice};
use crate::matrix::{identity, inverse_q, mat_mul, mat_vec, transpose, IMat};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

/// Integer matrix g with gᵀ G g = G, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIsometry {
    pub matrix: IMat,
}

impl LatticeIsometry {
    pub fn identity(n: usize) -> LatticeIsometry {
        LatticeIsometry { matrix: identity(n) }
    }

    /// Accepts the matrix only if it preserves the Gram matrix.
    pub fn new(gram: &IMat, matrix: IMat) -> Result<LatticeIsometry> {
        let g = LatticeIsometry { matrix };
        if g.matrix.len() != gram.len() || !g.preserves(gram) {
            return Err(Error::Precondition("matrix does not preserve the Gram matrix".into()));
        }
        Ok(g)
    }

    pub fn preserves(&self, gram: &IMat) -> bool {
        mat_mul(&transpose(&self.matrix), &mat_mul(gram, &self.matrix)) == *gram
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    /// self ∘ other
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        LatticeIsometry { matrix: mat_mul(&self.matrix, &other.matrix) }
    }

    /// g⁻¹ = G⁻¹ gᵀ G.
    pub fn inverse(&self, gram: &IMat) -> LatticeIsometry {
        let gi = inverse_q(gram).expect("nondegenerate");
        let t = mat_mul(&transpose(&self.matrix), gram);
        let n = gram.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = (0..n).fold(num_rational::BigRational::zero(), |a, k| a + &gi[i][k] * num_rational::BigRational::from_integer(t[k][j].into()));
                        s.to_integer().to_i64().expect("integral inverse")
                    })
                    .collect()
            })
            .collect();
        LatticeIsometry { matrix }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransvectionError {
    NotIsotropic,
    NotOrthogonal,
    /// the rational matrix has a non-integral entry at (row, column)
    NonIntegral { row: usize, col: usize },
}

impl From<TransvectionError> for Error {
    fn from(e: TransvectionError) -> Error {
        Error::Precondition(format!("transvection: {:?}", e))
    }
}

fn ip_q(gram: &IMat, x: &[Q], y: &[Q]) -> Q {
    let n = gram.len();
    let mut s = Q::zero();
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != 0 && !x[i].is_zero() && !y[j].is_zero() {
                s += x[i] * y[j] * gram[i][j];
            }
        }
    }
    s
}

/// Rational matrix of t(x, y)(ν) = ν − ⟨y,ν⟩x + ⟨x,ν⟩y − ½⟨x,ν⟩⟨y,y⟩x.
pub fn transvection_rational(gram: &IMat, x: &[Q], y: &[Q]) -> std::result::Result<Vec<Vec<Q>>, TransvectionError> {
    if !ip_q(gram, x, x).is_zero() {
        return Err(TransvectionError::NotIsotropic);
    }
    if !ip_q(gram, x, y).is_zero() {
        return Err(TransvectionError::NotOrthogonal);
    }
    let n = gram.len();
    let yy = ip_q(gram, y, y);
    let mut m = vec![vec![Q::zero(); n]; n];
    for j in 0..n {
        let yn: Q = (0..n).map(|i| y[i] * gram[i][j]).sum();
        let xn: Q = (0..n).map(|i| x[i] * gram[i][j]).sum();
        for i in 0..n {
            let mut v = if i == j { Q::from_integer(1) } else { Q::zero() };
            v += -yn * x[i] + xn * y[i] - xn * yy / 2 * x[i];
            m[i][j] = v;
        }
    }
    Ok(m)
}

pub fn transvection(gram: &IMat, x: &[Q], y: &[Q]) -> std::result::Result<LatticeIsometry, TransvectionError> {
    let m = transvection_rational(gram, x, y)?;
    let mut out = vec![vec![0; m.len()]; m.len()];
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_integer() {
                return Err(TransvectionError::NonIntegral { row: i, col: j });
            }
            out[i][j] = v.to_integer();
        }
    }
    let g = LatticeIsometry { matrix: out };
    debug_assert!(g.preserves(gram));
    Ok(g)
}

fn tq(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn divisibility(gram: &IMat, u: &[i64]) -> i64 {
    mat_vec(gram, u).iter().fold(0, |a, &b| gcd(a, b))
}

pub fn is_primitive(u: &[i64]) -> bool {
    u.iter().fold(0, |a, &b| gcd(a, b)) == 1
}

/// Class of u/div(u) in G_M.
pub fn dual_class(lat: &EvenLattice, u: &[i64]) -> Elt {
    dual_class_in(&lat.discriminant(), &lat.gram, u)
}

/// dual_class with the discriminant form of `gram` supplied.
pub fn dual_class_in(gm: &DiscriminantForm, gram: &IMat, u: &[i64]) -> Elt {
    let d = divisibility(gram, u).max(1);
    let y: Vec<i64> = mat_vec(gram, u).iter().map(|x| x / d).collect();
    gm.from_dual_coords(&y)
}

/// Basis order: e1, f1 (U), e2, f2 (U(2)), r_1..r_m.
pub struct EichlerSetting {
    pub m: usize,
    pub lattice: EvenLattice,
    pub generators: Vec<LatticeIsometry>,
}

impl EichlerSetting {
    pub fn new(m: usize) -> Result<EichlerSetting> {
        if m == 0 {
            return Err(Error::Precondition("need at least one A1(-1) summand".into()));
        }
        let lattice = eichler_lattice(m)?;
        let generators = search_generators(&lattice.gram, m);
        Ok(EichlerSetting { m, lattice, generators })
    }

    pub fn rank(&self) -> usize {
        self.m + 4
    }
}

/// Moves used to normalize vectors: transvections along e1, f1 (with W1 = U(2) ⊕ A1(−1)^m partners and
/// their pairwise sums) and along e2, f2 (with W2 = U ⊕ A1(−1)^m partners), the swap e1 ↔ f1, and sign changes of the r_i.
/// None of them changes u* in G_M.
fn search_generators(gram: &IMat, m: usize) -> Vec<LatticeIsometry> {
    let n = m + 4;
    let b = |i| unit(n, i);
    let w1: Vec<Vec<i64>> = [2, 3].iter().map(|&i| b(i)).chain((0..m).map(|i| b(4 + i))).collect();
    let w2: Vec<Vec<i64>> = [0, 1].iter().map(|&i| b(i)).chain((0..m).map(|i| b(4 + i))).collect();
    let mut partners1 = w1.clone();
    for i in 0..w1.len() {
        for j in i + 1..w1.len() {
            for s in [1, -1] {
                partners1.push((0..n).map(|k| w1[i][k] + s * w1[j][k]).collect());
            }
        }
    }
    let mut out = Vec::new();
    let mut push = |x: &[i64], ys: &[Vec<i64>]| {
        for y in ys {
            for s in [1, -1] {
                let y: Vec<i64> = y.iter().map(|t| s * t).collect();
                if let Ok(g) = transvection(gram, &tq(x), &tq(&y)) {
                    out.push(g);
                }
            }
        }
    };
    push(&b(0), &partners1);
    push(&b(1), &partners1);
    push(&b(2), &w2);
    push(&b(3), &w2);
    let mut sw = identity(n);
    sw[0] = b(1);
    sw[1] = b(0);
    out.push(LatticeIsometry { matrix: sw });
    for i in 0..m {
        let mut s = identity(n);
        s[4 + i][4 + i] = -1;
        out.push(LatticeIsometry { matrix: s });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    /// e1, f1 coefficients vanish
    InW1,
    /// e2, f2 coefficients vanish
    InW2,
    /// some U coefficient is ±1
    UnitOnU,
}

fn reached(goal: Goal, x: &[i64]) -> bool {
    match goal {
        Goal::InW1 => x[0] == 0 && x[1] == 0,
        Goal::InW2 => x[2] == 0 && x[3] == 0,
        Goal::UnitOnU => x[0].abs() == 1 || x[1].abs() == 1,
    }
}

/// Best-first key: distance to the goal plus a tenth of the squared length, scaled by 10.
fn score(goal: Goal, x: &[i64]) -> i64 {
    let l2: i64 = x.iter().map(|t| t * t).sum();
    let kill = match goal {
        Goal::InW1 => x[0].abs() + x[1].abs(),
        Goal::InW2 => x[2].abs() + x[3].abs(),
        Goal::UnitOnU => x[0].abs().min(x[1].abs()),
    };
    10 * kill + l2
}

pub struct SearchHits {
    pub hits: Vec<(Vec<i64>, LatticeIsometry)>,
    pub nodes: usize,
}

/// Best-first search over generator words; returns up to `want` distinct goal vectors with their isometries.
fn normalize(set: &EichlerSetting, u: &[i64], goal: Goal, want: usize, budget: usize) -> SearchHits {
    let start = u.to_vec();
    let mut parent: HashMap<Vec<i64>, Option<(Vec<i64>, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut pq = BinaryHeap::new();
    pq.push(Reverse((score(goal, &start), start.clone())));
    let mut hits = Vec::new();
    let mut nodes = 0;
    while let Some(Reverse((_, x))) = pq.pop() {
        nodes += 1;
        if reached(goal, &x) {
            hits.push((x.clone(), path_isometry(set, &parent, &x)));
            if hits.len() >= want {
                break;
            }
        }
        if nodes >= budget {
            break;
        }
        for (k, g) in set.generators.iter().enumerate() {
            let y = g.apply(&x);
            if !parent.contains_key(&y) {
                parent.insert(y.clone(), Some((x.clone(), k)));
                pq.push(Reverse((score(goal, &y), y)));
            }
        }
    }
    SearchHits { hits, nodes }
}

fn path_isometry(set: &EichlerSetting, parent: &HashMap<Vec<i64>, Option<(Vec<i64>, usize)>>, x: &[i64]) -> LatticeIsometry {
    let mut g = LatticeIsometry::identity(set.rank());
    let mut cur = x.to_vec();
    while let Some(Some((prev, k))) = parent.get(&cur) {
        g = g.compose(&set.generators[*k]);
        cur = prev.clone();
    }
    g
}

/// Smallest solution z (supported on `coords`) of ⟨u, z⟩ = d: extended Euclid certificate,
/// improved by a bounded scan of small vectors with a deterministic tie-break.
fn choose_partner(gram: &IMat, u: &[i64], coords: &[usize], d: i64) -> Option<Vec<i64>> {
    let n = gram.len();
    let gu = mat_vec(gram, u);
    let c: Vec<i64> = coords.iter().map(|&i| gu[i]).collect();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let k = coords.len();
    if k <= 7 {
        let mut z = vec![-2i64; k];
        loop {
            if c.iter().zip(&z).map(|(a, b)| a * b).sum::<i64>() == d {
                let nrm: i64 = z.iter().map(|t| t * t).sum();
                if best.as_ref().map_or(true, |(b, bz)| (nrm, &z) < (*b, bz)) {
                    best = Some((nrm, z.clone()));
                }
            }
            let mut i = 0;
            while i < k && z[i] == 2 {
                z[i] = -2;
                i += 1;
            }
            if i == k {
                break;
            }
            z[i] += 1;
        }
    }
    let z = match best {
        Some((_, z)) => z,
        None => {
            // Euclid: fold coefficients into a running gcd with Bézout cofactors
            let mut g = 0i64;
            let mut co = vec![0i64; k];
            for i in 0..k {
                let (h, a, b) = egcd(g, c[i]);
                for t in co.iter_mut().take(i) {
                    *t *= a;
                }
                co[i] = b;
                g = h;
            }
            if g == 0 || d % g != 0 {
                return None;
            }
            co.iter().map(|t| t * (d / g)).collect()
        }
    };
    let mut out = vec![0; n];
    for (i, &ci) in coords.iter().enumerate() {
        out[ci] = z[i];
    }
    Some(out)
}

/// t(x, −v′) ∘ t(y, w/s) ∘ t(x, u′) for the hyperbolic pair (x, y) with ⟨x, y⟩ = s.
fn pivot(gram: &IMat, x: usize, y: usize, u: &[i64], v: &[i64], coords: &[usize], d: i64) -> Result<LatticeIsometry> {
    let n = gram.len();
    let s = gram[x][y];
    let up = choose_partner(gram, u, coords, d).ok_or_else(|| Error::Undecided("no partner for u".into()))?;
    let vp = choose_partner(gram, v, coords, d).ok_or_else(|| Error::Undecided("no partner for v".into()))?;
    let w: Vec<Q> = (0..n).map(|i| Q::new(u[i] - v[i], d * s)).collect();
    let xv = tq(&unit(n, x));
    let yv = tq(&unit(n, y));
    let neg_vp: Vec<Q> = vp.iter().map(|&t| Q::from_integer(-t)).collect();
    let a = transvection(gram, &xv, &tq(&up))?;
    let b = transvection(gram, &yv, &w)?;
    let c = transvection(gram, &xv, &neg_vp)?;
    Ok(c.compose(&b).compose(&a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcase {
    Identity,
    /// divisibility 1: both vectors are brought to N e1 + f1
    Unimodular,
    /// u0*, v0* ≠ 0: pivot on U inside U(2) ⊕ A1(−1)^m
    NonzeroDuals,
    /// u0* = v0* = 0: pivot on U(2) inside U ⊕ A1(−1)^m
    ZeroDuals,
    /// exactly one of u0*, v0* vanishes
    Mixed,
}

#[derive(Clone, Debug)]
pub struct EichlerMove {
    pub isometry: LatticeIsometry,
    pub subcase: Subcase,
    pub search_nodes: usize,
}

const BUDGET: usize = 20000;

fn verified(set: &EichlerSetting, g: LatticeIsometry, u: &[i64], v: &[i64]) -> Option<LatticeIsometry> {
    (g.preserves(&set.lattice.gram) && g.apply(u) == v).then_some(g)
}

/// Returns g ∈ O(M) with g(u) = v following the constructive proof of the generalized Eichler criterion.
pub fn eichler_move(set: &EichlerSetting, u: &[i64], v: &[i64]) -> Result<EichlerMove> {
    let n = set.rank();
    let gram = &set.lattice.gram;
    if u.len() != n || v.len() != n {
        return Err(Error::Precondition("vectors have the wrong length".into()));
    }
    if !is_primitive(u) || !is_primitive(v) {
        return Err(Error::Precondition("vectors must be primitive".into()));
    }
    let norm = |x: &[i64]| crate::matrix::bilinear(gram, x, x);
    if norm(u) != norm(v) {
        return Err(Error::Precondition(format!("invariant mismatch: u² = {} but v² = {}", norm(u), norm(v))));
    }
    let d = divisibility(gram, u);
    if d != divisibility(gram, v) || dual_class(&set.lattice, u) != dual_class(&set.lattice, v) {
        return Err(Error::Precondition("invariant mismatch: u* differs from v*".into()));
    }
    if u == v {
        return Ok(EichlerMove { isometry: LatticeIsometry::identity(n), subcase: Subcase::Identity, search_nodes: 0 });
    }
    if d == 1 {
        let (hu, nu) = to_canonical(set, u)?;
        let (hv, nv) = to_canonical(set, v)?;
        let g = hv.inverse(gram).compose(&hu);
        return verified(set, g, u, v)
            .map(|isometry| EichlerMove { isometry, subcase: Subcase::Unimodular, search_nodes: nu + nv })
            .ok_or_else(|| Error::Undecided("unimodular normalization failed verification".into()));
    }
    let zero0 = |x: &[i64]| x[..4].iter().all(|t| t % d == 0);
    let subcase = match (zero0(u), zero0(v)) {
        (false, false) => Subcase::NonzeroDuals,
        (true, true) => Subcase::ZeroDuals,
        _ => Subcase::Mixed,
    };
    let w1: Vec<usize> = (2..n).collect();
    let w2: Vec<usize> = [0, 1].into_iter().chain(4..n).collect();
    let mut nodes = 0;
    let routes: [Goal; 2] = if subcase == Subcase::ZeroDuals { [Goal::InW2, Goal::InW1] } else { [Goal::InW1, Goal::InW2] };
    for goal in routes {
        let want = if goal == Goal::InW2 { 8 } else { 1 };
        let su = normalize(set, u, goal, want, BUDGET);
        let sv = normalize(set, v, goal, want, BUDGET);
        nodes += su.nodes + sv.nodes;
        for (u1, hu) in &su.hits {
            for (v1, hv) in &sv.hits {
                let p = match goal {
                    Goal::InW1 => pivot(gram, 0, 1, u1, v1, &w1, d),
                    _ => pivot(gram, 2, 3, u1, v1, &w2, d),
                };
                if let Ok(p) = p {
                    let g = hv.inverse(gram).compose(&p).compose(hu);
                    if let Some(isometry) = verified(set, g, u, v) {
                        return Ok(EichlerMove { isometry, subcase, search_nodes: nodes });
                    }
                }
            }
        }
    }
    Err(Error::Undecided(format!("normalization failed in subcase {:?} after {} search nodes", subcase, nodes)))
}

/// h with h(u) = N e1 + f1 for divisibility-one u.
fn to_canonical(set: &EichlerSetting, u: &[i64]) -> Result<(LatticeIsometry, usize)> {
    let n = set.rank();
    let gram = &set.lattice.gram;
    let s = normalize(set, u, Goal::UnitOnU, 1, BUDGET);
    let (x, mut h) = s.hits.into_iter().next().ok_or_else(|| Error::Undecided("no vector with a unit U coefficient found".into()))?;
    let mut x = x;
    if x[1].abs() != 1 {
        let mut sw = identity(n);
        sw[0] = unit(n, 1);
        sw[1] = unit(n, 0);
        let sw = LatticeIsometry { matrix: sw };
        x = sw.apply(&x);
        h = sw.compose(&h);
    }
    let b = x[1];
    let y: Vec<Q> = (0..n).map(|i| if i < 2 { Q::zero() } else { Q::from_integer(-b * x[i]) }).collect();
    let t = transvection(gram, &tq(&unit(n, 0)), &y)?;
    x = t.apply(&x);
    h = t.compose(&h);
    if b == -1 {
        let mut neg = identity(n);
        neg[0][0] = -1;
        neg[1][1] = -1;
        let neg = LatticeIsometry { matrix: neg };
        x = neg.apply(&x);
        h = neg.compose(&h);
    }
    let half = crate::matrix::bilinear(gram, u, u) / 2;
    let mut target = vec![0; n];
    target[0] = half;
    target[1] = 1;
    if x != target {
        return Err(Error::Undecided("canonical form not reached".into()));
    }
    Ok((h, s.nodes))
}

/// Generating set for the orbit oracle: transvections e_i ↦ along isotropic basis vectors with basis partners,
/// swaps of isolated hyperbolic pairs and sign changes of isolated basis vectors.
pub fn oracle_generators(gram: &IMat) -> Vec<LatticeIsometry> {
    let n = gram.len();
    let isolated = |i: usize, allowed: &[usize]| (0..n).all(|c| allowed.contains(&c) || gram[i][c] == 0);
    let mut out = BTreeSet::new();
    for i in 0..n {
        if gram[i][i] != 0 {
            continue;
        }
        for j in 0..n {
            if j == i || gram[i][j] != 0 {
                continue;
            }
            for s in [1, -1] {
                let mut y = unit(n, j);
                y[j] = s;
                if let Ok(g) = transvection(gram, &tq(&unit(n, i)), &tq(&y)) {
                    out.insert(g);
                }
            }
        }
    }
    for i in 0..n {
        if isolated(i, &[i]) {
            let mut s = identity(n);
            s[i][i] = -1;
            out.insert(LatticeIsometry { matrix: s });
        }
        for j in i + 1..n {
            if gram[i][i] == 0 && gram[j][j] == 0 && gram[i][j] != 0 && isolated(i, &[i, j]) && isolated(j, &[i, j]) {
                let mut s = identity(n);
                s[i] = unit(n, j);
                s[j] = unit(n, i);
                out.insert(LatticeIsometry { matrix: s });
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleResult {
    /// v was reached at this word length
    Hit(usize),
    /// not reached within the bound; nothing is concluded
    Inconclusive { explored: usize },
}

/// Breadth-first search over words in `oracle_generators`; sound but incomplete.
pub fn orbit_oracle(lat: &EvenLattice, u: &[i64], v: &[i64], word_length_bound: usize) -> OracleResult {
    let gens = oracle_generators(&lat.gram);
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([u.to_vec()]);
    let mut frontier = vec![u.to_vec()];
    for depth in 0..=word_length_bound {
        if frontier.iter().any(|x| x == v) {
            return OracleResult::Hit(depth);
        }
        if depth == word_length_bound {
            break;
        }
        let next: BTreeSet<Vec<i64>> = frontier.par_iter().flat_map_iter(|x| gens.iter().map(move |g| g.apply(x))).collect();
        frontier = next.into_iter().filter(|y| seen.insert(y.clone())).collect();
    }
    OracleResult::Inconclusive { explored: seen.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{angle, u as hyp};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transvection_table() {
        // U ⊕ A1(−1): t(−e1, r)(f1) = f1 + e1 − r, t(−e1, r)(r) = r − 2e1
        let lat = EvenLattice::direct_sum(&[hyp(1).unwrap(), crate::lattice::a1(-1).unwrap()]);
        let t = transvection(&lat.gram, &tq(&[-1, 0, 0]), &tq(&[0, 0, 1])).unwrap();
        assert_eq!(t.apply(&[0, 1, 0]), vec![1, 1, -1]);
        assert_eq!(t.apply(&[0, 0, 1]), vec![-2, 0, 1]);
        assert_eq!(t.apply(&[-1, 0, 0]), vec![-1, 0, 0]);
        let set = EichlerSetting::new(2).unwrap();
        let g = &set.lattice.gram;
        let up = tq(&[0, 0, 1, 1, 1, 0]);
        let un: Vec<Q> = up.iter().map(|x| -*x).collect();
        let a = transvection(g, &tq(&[1, 0, 0, 0, 0, 0]), &up).unwrap();
        let b = transvection(g, &tq(&[1, 0, 0, 0, 0, 0]), &un).unwrap();
        assert_eq!(a.compose(&b), LatticeIsometry::identity(6));
        // t(f2, r/2) is not integral
        let half: Vec<Q> = vec![Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::new(1, 2), Q::zero()];
        assert!(matches!(transvection(g, &tq(&[0, 0, 0, 1, 0, 0]), &half), Err(TransvectionError::NonIntegral { .. })));
        assert_eq!(transvection(g, &tq(&[1, 1, 0, 0, 0, 0]), &half), Err(TransvectionError::NotIsotropic));
    }

    #[test]
    fn subcase_one_composition() {
        let set = EichlerSetting::new(2).unwrap();
        // u, v ∈ U(2) ⊕ A1(−1)^2, divisibility 2, u* = v*
        let u = [0, 0, 1, 1, 2, 1];
        let v = [0, 0, 1, -1, 0, 1];
        assert_eq!(divisibility(&set.lattice.gram, &u), 2);
        let mv = eichler_move(&set, &u, &v).unwrap();
        assert_eq!(mv.isometry.apply(&u), v.to_vec());
        assert_eq!(mv.subcase, Subcase::NonzeroDuals);
        let same = eichler_move(&set, &u, &u).unwrap();
        assert_eq!(same.subcase, Subcase::Identity);
    }

    #[test]
    fn random_moves_and_controls() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        for m in 1..=3 {
            let set = EichlerSetting::new(m).unwrap();
            let mut buckets: HashMap<(i64, i64, Elt), Vec<Vec<i64>>> = HashMap::new();
            for _ in 0..300 {
                let u: Vec<i64> = (0..m + 4).map(|_| rng.gen_range(-3..=3)).collect();
                if !is_primitive(&u) {
                    continue;
                }
                let key = (crate::matrix::bilinear(&set.lattice.gram, &u, &u), divisibility(&set.lattice.gram, &u), dual_class(&set.lattice, &u));
                buckets.entry(key).or_default().push(u);
            }
            let mut keys: Vec<_> = buckets.keys().cloned().collect();
            keys.sort();
            for k in keys.iter().filter(|k| buckets[k].len() >= 2).take(5) {
                let (u, v) = (&buckets[k][0], &buckets[k][1]);
                let mv = eichler_move(&set, u, v).unwrap();
                assert!(mv.isometry.preserves(&set.lattice.gram));
                assert_eq!(&mv.isometry.apply(u), v);
                done += 1;
            }
        }
        assert!(done >= 8);
        let set = EichlerSetting::new(1).unwrap();
        assert!(eichler_move(&set, &[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0]).is_err());
        assert!(matches!(orbit_oracle(&set.lattice, &[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], 3), OracleResult::Inconclusive { .. }));
    }

    #[test]
    fn oracle_examples() {
        let lat = EvenLattice::direct_sum(&[hyp(1).unwrap(), angle(-2).unwrap()]);
        assert_eq!(orbit_oracle(&lat, &[1, 2, 1], &[1, 2, 1], 2), OracleResult::Hit(0));
        assert_eq!(orbit_oracle(&lat, &[0, 0, 1], &[0, 0, -1], 2), OracleResult::Hit(1));
        let set = EichlerSetting::new(1).unwrap();
        let (u, v) = ([1, 1, 0, 0, 0], [2, 1, 0, 0, 1]);
        let mv = eichler_move(&set, &u, &v).unwrap();
        assert_eq!(mv.subcase, Subcase::Unimodular);
        assert_eq!(mv.isometry.apply(&u), v.to_vec());
        assert!(matches!(orbit_oracle(&set.lattice, &u, &v, 4), OracleResult::Hit(_)));
    }

    proptest! {
        #[test]
        fn additivity(ys in proptest::collection::vec(-3i64..=3, 10), pick in 0usize..4) {
            let set = EichlerSetting::new(2).unwrap();
            let g = &set.lattice.gram;
            let x = unit(6, pick);
            // project y, y' into x^⊥ by dropping the partner coordinate
            let partner = [1, 0, 3, 2][pick];
            let mut y = ys[..6].to_vec();
            let mut y2 = ys[4..].to_vec();
            y[partner] = 0;
            y2[partner] = 0;
            let sum: Vec<i64> = y.iter().zip(&y2).map(|(a, b)| a + b).collect();
            let a = transvection_rational(g, &tq(&x), &tq(&y)).unwrap();
            let b = transvection_rational(g, &tq(&x), &tq(&y2)).unwrap();
            let c = transvection_rational(g, &tq(&x), &tq(&sum)).unwrap();
            let ab: Vec<Vec<Q>> = (0..6).map(|i| (0..6).map(|j| (0..6).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect();
            prop_assert_eq!(ab, c);
        }
    }
}

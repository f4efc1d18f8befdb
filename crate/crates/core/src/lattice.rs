//! Even lattices: construction, standard examples, file format, split predicates.

use crate::discriminant::DiscriminantForm;
use crate::error::{Error, Result};
use crate::matrix::{block_diag, det, inertia, IMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    pub name: String,
    pub blocks: Option<String>,
    pub gram: IMat,
    pub signature: (usize, usize),
}

impl EvenLattice {
    pub fn new(gram: IMat) -> Result<EvenLattice> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidLattice("empty Gram matrix".into()));
        }
        for (i, r) in gram.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidLattice("Gram matrix not square".into()));
            }
            if r[i] % 2 != 0 {
                return Err(Error::InvalidLattice(format!("odd diagonal entry {} at {}", r[i], i)));
            }
            for j in 0..n {
                if gram[j][i] != r[j] {
                    return Err(Error::InvalidLattice("Gram matrix not symmetric".into()));
                }
            }
        }
        if det(&gram) == 0 {
            return Err(Error::InvalidLattice("degenerate Gram matrix".into()));
        }
        let (p, m, _) = inertia(&gram);
        Ok(EvenLattice { name: String::new(), blocks: None, gram, signature: (p, m) })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> i128 {
        det(&self.gram)
    }

    pub fn sign(&self) -> i64 {
        self.signature.0 as i64 - self.signature.1 as i64
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature.1 == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature.0 == 0
    }

    pub fn discriminant(&self) -> DiscriminantForm {
        DiscriminantForm::from_lattice(self)
    }

    pub fn rescale(&self, n: i64) -> Result<EvenLattice> {
        if n == 0 {
            return Err(Error::InvalidLattice("rescale by 0".into()));
        }
        let g = self.gram.iter().map(|r| r.iter().map(|&x| x * n).collect()).collect();
        let mut l = EvenLattice::new(g)?;
        l.blocks = self.blocks.as_ref().map(|b| format!("rescale({},{})", b, n));
        Ok(l)
    }

    pub fn direct_sum(parts: &[EvenLattice]) -> EvenLattice {
        let g = block_diag(&parts.iter().map(|p| p.gram.clone()).collect::<Vec<_>>());
        let mut l = EvenLattice::new(g).expect("direct sum of lattices is a lattice");
        if parts.iter().all(|p| p.blocks.is_some()) {
            l.blocks = Some(parts.iter().map(|p| p.blocks.clone().unwrap()).collect::<Vec<_>>().join(" + "));
        }
        l
    }
}

fn tagged(gram: IMat, tag: String) -> Result<EvenLattice> {
    let mut l = EvenLattice::new(gram)?;
    l.blocks = Some(tag);
    Ok(l)
}

/// Hyperbolic plane U(N).
pub fn u(n: i64) -> Result<EvenLattice> {
    if n == 0 {
        return Err(Error::InvalidLattice("U(0)".into()));
    }
    tagged(vec![vec![0, n], vec![n, 0]], format!("U({})", n))
}

/// ⟨m⟩ for even m.
pub fn angle(m: i64) -> Result<EvenLattice> {
    if m % 2 != 0 {
        return Err(Error::InvalidLattice(format!("<{}> is odd", m)));
    }
    tagged(vec![vec![m]], format!("<{}>", m))
}

/// A1(s) = ⟨2s⟩.
pub fn a1(s: i64) -> Result<EvenLattice> {
    if s == 0 {
        return Err(Error::InvalidLattice("A1(0)".into()));
    }
    tagged(vec![vec![2 * s]], format!("A1({})", s))
}

pub fn a2(s: i64) -> Result<EvenLattice> {
    if s == 0 {
        return Err(Error::InvalidLattice("A2(0)".into()));
    }
    tagged(vec![vec![2 * s, -s], vec![-s, 2 * s]], format!("A2({})", s))
}

pub fn d4(s: i64) -> Result<EvenLattice> {
    if s == 0 {
        return Err(Error::InvalidLattice("D4(0)".into()));
    }
    let mut g = vec![vec![0i64; 4]; 4];
    for i in 0..4 {
        g[i][i] = 2 * s;
    }
    for j in [0, 2, 3] {
        g[1][j] = -s;
        g[j][1] = -s;
    }
    tagged(g, format!("D4({})", s))
}

/// E8 root lattice scaled by s.
pub fn e8(s: i64) -> Result<EvenLattice> {
    if s == 0 {
        return Err(Error::InvalidLattice("E8(0)".into()));
    }
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = vec![vec![0i64; 8]; 8];
    for i in 0..8 {
        g[i][i] = 2 * s;
    }
    for (a, b) in edges {
        g[a][b] = -s;
        g[b][a] = -s;
    }
    tagged(g, format!("E8({})", s))
}

/// Λ_g = ⟨2 − 2g⟩ ⊕ E8(−1)² ⊕ U².
pub fn lambda_g(g: i64) -> Result<EvenLattice> {
    if g < 2 {
        return Err(Error::InvalidLattice("genus must be at least 2".into()));
    }
    Ok(EvenLattice::direct_sum(&[angle(2 - 2 * g)?, e8(-1)?, e8(-1)?, u(1)?, u(1)?]).named(&format!("lambda_{}", g)))
}

/// U ⊕ U(2) ⊕ A1(−1)^m.
pub fn eichler_lattice(m: usize) -> Result<EvenLattice> {
    let mut parts = vec![u(1)?, u(2)?];
    for _ in 0..m {
        parts.push(a1(-1)?);
    }
    Ok(EvenLattice::direct_sum(&parts).named(&format!("eichler_{}", m)))
}

/// Parses block expressions such as `U(1) + U(2) + A1(-1) + E8(-1) + <2>`.
pub fn from_blocks(expr: &str) -> Result<EvenLattice> {
    let mut parts = Vec::new();
    for term in split_top(expr) {
        parts.push(parse_block(term.trim())?);
    }
    if parts.is_empty() {
        return Err(Error::Parse("empty block expression".into()));
    }
    Ok(EvenLattice::direct_sum(&parts))
}

fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() {
        out.push(&s[start..]);
    }
    out
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{}'", s)))
}

fn parse_block(t: &str) -> Result<EvenLattice> {
    if let Some(inner) = t.strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
        return angle(parse_int(inner)?);
    }
    if let Some(rest) = t.strip_prefix("rescale(").and_then(|x| x.strip_suffix(')')) {
        let k = rest.rfind(',').ok_or_else(|| Error::Parse("rescale needs two arguments".into()))?;
        return from_blocks(&rest[..k])?.rescale(parse_int(&rest[k + 1..])?);
    }
    let (head, arg) = match t.find('(') {
        Some(i) => {
            let a = t[i + 1..].strip_suffix(')').ok_or_else(|| Error::Parse(format!("unbalanced '{}'", t)))?;
            (&t[..i], parse_int(a)?)
        }
        None => (t, 1),
    };
    match head {
        "U" => u(arg),
        "A1" => a1(arg),
        "A2" => a2(arg),
        "D4" => d4(arg),
        "E8" => e8(arg),
        "lambda" => lambda_g(arg),
        _ => Err(Error::Parse(format!("unknown block '{}'", head))),
    }
}

/// Text format: `name:`, optional `blocks:`, and `gram:` as rows separated by `;`.
pub fn parse_lattice_file(text: &str) -> Result<EvenLattice> {
    let (mut name, mut blocks, mut gram) = (None, None, None);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once(':').ok_or_else(|| Error::Parse(format!("expected key: value, got '{}'", line)))?;
        match k.trim() {
            "name" => name = Some(v.trim().to_string()),
            "blocks" => blocks = Some(v.trim().to_string()),
            "gram" => {
                let rows: Result<IMat> = v
                    .split(';')
                    .filter(|r| !r.trim().is_empty())
                    .map(|r| r.split_whitespace().map(parse_int).collect())
                    .collect();
                gram = Some(rows?);
            }
            other => return Err(Error::Parse(format!("unknown key '{}'", other))),
        }
    }
    let mut l = match (&blocks, gram) {
        (_, Some(g)) => {
            let l = EvenLattice::new(g)?;
            if let Some(b) = &blocks {
                if from_blocks(b)?.gram != l.gram {
                    return Err(Error::Parse("gram disagrees with blocks".into()));
                }
            }
            l
        }
        (Some(b), None) => from_blocks(b)?,
        (None, None) => return Err(Error::Parse("lattice file needs gram or blocks".into())),
    };
    l.blocks = blocks;
    l.name = name.unwrap_or_default();
    Ok(l)
}

pub fn write_lattice_file(l: &EvenLattice) -> String {
    let mut s = format!("name: {}\n", l.name);
    if let Some(b) = &l.blocks {
        s += &format!("blocks: {}\n", b);
    }
    let rows: Vec<String> = l
        .gram
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    s += &format!("gram: {}\n", rows.join("; "));
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub local_hyperbolic_sufficient: bool,
    pub two_global_u_sufficient: bool,
    pub p_elementary: bool,
    pub p_elementary_splits_u: bool,
    pub k3_type_sufficient: bool,
}

/// Sufficient numerical criteria; `false` means the criterion does not decide.
pub fn split_predicates(m: &EvenLattice, p: u64) -> SplitReport {
    let g = m.discriminant();
    let r = m.rank() as i64;
    let n = m.signature.1 as i64;
    let is_2n = m.signature.0 == 2;
    let ell = g.divisors.len() as i64;
    let local = (g.p_rank(p) as i64) < r - 2;
    let two_u = is_2n && ell <= n - 2;
    let p_elem = g.divisors.iter().all(|&d| d == p as i64);
    let splits = is_2n
        && p_elem
        && if p == 2 { ell <= n } else { ell < n || (ell == n && n.rem_euclid(8) == 2) };
    let primes: Vec<u64> = crate::arith::factor(m.det().unsigned_abs() as u64).iter().map(|f| f.0).collect();
    let k3 = two_u && primes.iter().all(|&q| (g.p_rank(q) as i64) < r - 4);
    SplitReport {
        local_hyperbolic_sufficient: local,
        two_global_u_sufficient: two_u,
        p_elementary: p_elem,
        p_elementary_splits_u: splits,
        k3_type_sufficient: k3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard() {
        assert_eq!(u(1).unwrap().gram, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(u(1).unwrap().rescale(2).unwrap().gram, vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(e8(1).unwrap().det(), 1);
        assert_eq!(e8(1).unwrap().signature, (8, 0));
        let l = lambda_g(2).unwrap();
        assert_eq!(l.rank(), 21);
        assert_eq!(l.gram[0][0], -2);
        assert_eq!(l.signature, (2, 19));
        assert!(angle(3).is_err());
        assert!(u(0).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let l = eichler_lattice(2).unwrap();
        let s = write_lattice_file(&l);
        let l2 = parse_lattice_file(&s).unwrap();
        assert_eq!(l, l2);
        assert_eq!(write_lattice_file(&l2), s);
        let l3 = parse_lattice_file("name: x\nblocks: rescale(U(1) + A2(1),3)\n").unwrap();
        assert_eq!(l3.det(), -243);
    }

    #[test]
    fn predicates() {
        let r = split_predicates(&lambda_g(2).unwrap(), 2);
        assert!(r.k3_type_sufficient);
        let e = EvenLattice::direct_sum(&[u(1).unwrap(), u(2).unwrap()]);
        let mut parts = vec![e];
        for _ in 0..8 {
            parts.push(a1(-1).unwrap());
        }
        let m = EvenLattice::direct_sum(&parts);
        assert!(split_predicates(&m, 2).p_elementary_splits_u);
        let r3 = split_predicates(&e8(3).unwrap(), 3);
        assert!(!r3.local_hyperbolic_sufficient);
    }
}

//! Metaplectic elements (g, φ) with φ(τ)² = cτ + d, pinned by their value at τ0 = 2i.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type Mat2 = [[i64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    S,
    T,
    Tinv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MetaplecticElement {
    pub mat: Mat2,
    /// φ(τ) = branch · principal_sqrt(cτ + d)
    pub branch: i8,
}

pub fn tau0() -> Complex64 {
    Complex64::new(0.0, 2.0)
}

pub fn principal_sqrt_linear(c: i64, d: i64, tau: Complex64) -> Complex64 {
    if c == 0 {
        return if d >= 0 { Complex64::new((d as f64).sqrt(), 0.0) } else { Complex64::new(0.0, (-d as f64).sqrt()) };
    }
    (tau * c as f64 + d as f64).sqrt()
}

pub fn mat_mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn det2(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Branch s ∈ {±1} with value = s · principal_sqrt(cτ0 + d).
fn branch_of(value: Complex64, c: i64, d: i64) -> i8 {
    let r = value / principal_sqrt_linear(c, d, tau0());
    if (r - 1.0).norm() < 1e-9 {
        1
    } else if (r + 1.0).norm() < 1e-9 {
        -1
    } else {
        panic!("branch evaluation off the unit signs: {}", r)
    }
}

impl MetaplecticElement {
    pub fn new(mat: Mat2, branch: i8) -> MetaplecticElement {
        assert!(branch == 1 || branch == -1);
        assert!(mat[1][0] != 0 || mat[1][1] != 0);
        MetaplecticElement { mat, branch }
    }

    pub fn identity() -> Self {
        Self::new([[1, 0], [0, 1]], 1)
    }

    pub fn t() -> Self {
        Self::new([[1, 1], [0, 1]], 1)
    }

    pub fn t_pow(k: i64) -> Self {
        Self::new([[1, k], [0, 1]], 1)
    }

    pub fn s() -> Self {
        Self::new([[0, -1], [1, 0]], 1)
    }

    /// Z = S², acting on H trivially with φ = i.
    pub fn z() -> Self {
        Self::s().mul(&Self::s())
    }

    /// g̃_α = (diag(α², 1), 1).
    pub fn g_alpha(alpha: i64) -> Self {
        Self::new([[alpha * alpha, 0], [0, 1]], 1)
    }

    pub fn from_gen(g: Gen) -> Self {
        match g {
            Gen::S => Self::s(),
            Gen::T => Self::t(),
            Gen::Tinv => Self::t_pow(-1),
        }
    }

    pub fn det(&self) -> i64 {
        det2(&self.mat)
    }

    pub fn act(&self, tau: Complex64) -> Complex64 {
        let m = &self.mat;
        (tau * m[0][0] as f64 + m[0][1] as f64) / (tau * m[1][0] as f64 + m[1][1] as f64)
    }

    pub fn phi(&self, tau: Complex64) -> Complex64 {
        principal_sqrt_linear(self.mat[1][0], self.mat[1][1], tau) * self.branch as f64
    }

    /// (g, φ)(g′, φ′) = (gg′, φ(g′τ) φ′(τ)).
    pub fn mul(&self, o: &Self) -> Self {
        let m = mat_mul2(&self.mat, &o.mat);
        let t = tau0();
        let v = self.phi(o.act(t)) * o.phi(t);
        Self::new(m, branch_of(v, m[1][0], m[1][1]))
    }

    /// Inverse for det 1 elements: (g⁻¹, 1/φ(g⁻¹τ)).
    pub fn inverse(&self) -> Self {
        assert_eq!(self.det(), 1);
        let [[a, b], [c, d]] = self.mat;
        let inv = Self::new([[d, -b], [-c, a]], 1);
        let t = tau0();
        let v = Complex64::new(1.0, 0.0) / self.phi(inv.act(t));
        Self::new(inv.mat, branch_of(v, -c, a))
    }

    /// The same matrix with the other branch: multiplication by (I, −1) = S⁴.
    pub fn flip(&self) -> Self {
        Self::new(self.mat, -self.branch)
    }
}

pub fn word_product(word: &[Gen]) -> MetaplecticElement {
    word.iter().fold(MetaplecticElement::identity(), |acc, &g| acc.mul(&MetaplecticElement::from_gen(g)))
}

/// Parses a word in S, T and t = T⁻¹.
pub fn parse_word(s: &str) -> Result<Vec<Gen>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'S' => Ok(Gen::S),
            'T' => Ok(Gen::T),
            't' => Ok(Gen::Tinv),
            _ => Err(Error::Parse(format!("unknown generator '{}' (use S, T, t)", c))),
        })
        .collect()
}

/// Writes a det-1 element as a word in S, T, T⁻¹ via Euclid on the bottom row.
pub fn decompose(el: &MetaplecticElement) -> Result<Vec<Gen>> {
    if el.det() != 1 {
        return Err(Error::Precondition("decompose needs determinant 1".into()));
    }
    // left multiplications L_m ... L_1 M = R
    let mut m = el.mat;
    let mut left: Vec<Vec<Gen>> = Vec::new();
    while m[1][0] != 0 {
        let k = m[0][0].div_euclid(m[1][0]);
        if k != 0 {
            m = mat_mul2(&[[1, -k], [0, 1]], &m);
            left.push(vec![if k > 0 { Gen::T } else { Gen::Tinv }; k.unsigned_abs() as usize]);
        }
        m = mat_mul2(&[[0, -1], [1, 0]], &m);
        // inverse of S is S³ up to the central element
        left.push(vec![Gen::S, Gen::S, Gen::S]);
    }
    let mut word: Vec<Gen> = Vec::new();
    for l in left.iter() {
        word.extend(l);
    }
    let (a, b) = (m[0][0], m[0][1]);
    let tail_b = if a == 1 {
        b
    } else {
        word.extend([Gen::S, Gen::S]);
        -b
    };
    word.extend(vec![if tail_b > 0 { Gen::T } else { Gen::Tinv }; tail_b.unsigned_abs() as usize]);
    let p = word_product(&word);
    debug_assert_eq!(p.mat, el.mat);
    if p.branch != el.branch {
        word.extend([Gen::S; 4]);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let s = MetaplecticElement::s();
        let t = MetaplecticElement::t();
        let z = MetaplecticElement::z();
        assert_eq!(z.mat, [[-1, 0], [0, -1]]);
        let st = s.mul(&t);
        let st3 = st.mul(&st).mul(&st);
        assert_eq!(st3, z);
        let s4 = z.mul(&z);
        assert_eq!(s4, MetaplecticElement::identity().flip());
        assert_eq!(s.mul(&s.inverse()), MetaplecticElement::identity());
    }

    #[test]
    fn decompose_roundtrip() {
        for el in [
            MetaplecticElement::s().mul(&MetaplecticElement::t()),
            MetaplecticElement::new([[2, 1], [-7, -3]], -1),
            MetaplecticElement::new([[-1, 4], [0, -1]], 1),
            MetaplecticElement::new([[5, 2], [12, 5]], -1),
        ] {
            let w = decompose(&el).unwrap();
            assert_eq!(word_product(&w), el);
        }
    }
}

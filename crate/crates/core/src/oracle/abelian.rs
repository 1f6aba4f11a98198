//! The abelianization of a finitely presented group, via the Smith normal
//! form of its relation matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentation::Presentation;
use crate::word::Word;

type Matrix = Vec<Vec<BigInt>>;

/// `D = P · A · Q` with `D` diagonal, `d₁ | d₂ | …`, and `P`, `Q` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: Matrix,
    pub right: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form of an `m × n` integer matrix.
pub fn smith_normal_form(a: &[Vec<BigInt>], ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut d: Matrix = a.to_vec();
    let mut p = identity(m);
    let mut q = identity(n);

    let row_axpy = |mat: &mut Matrix, dst: usize, src: usize, k: &BigInt| {
        let (s, t) = if dst < src {
            let (lo, hi) = mat.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = mat.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in s.iter_mut().zip(t.iter()) {
            *x -= k * y;
        }
    };
    let col_axpy = |mat: &mut Matrix, dst: usize, src: usize, k: &BigInt| {
        for row in mat.iter_mut() {
            let y = row[src].clone();
            row[dst] -= k * y;
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(d, p, q, m, n);
            };
            d.swap(t, pi);
            p.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let k = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &k);
                row_axpy(&mut p, i, t, &k);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let k = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &k);
                col_axpy(&mut q, j, t, &k);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut p, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in p[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(d, p, q, m, n)
}

fn finish(d: Matrix, p: Matrix, q: Matrix, m: usize, n: usize) -> SmithForm {
    let diagonal = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    SmithForm { diagonal, left: p, right: q }
}

/// Solutions `p` of a system of congruences in one unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solutions {
    None,
    /// Exactly one integer.
    Exact(BigInt),
    /// `p ≡ residue (mod modulus)`, `modulus ≥ 1`, `0 ≤ residue < modulus`.
    Residue { residue: BigInt, modulus: BigInt },
}

impl Solutions {
    fn all() -> Self {
        Solutions::Residue { residue: BigInt::zero(), modulus: BigInt::one() }
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        match self {
            Solutions::None => false,
            Solutions::Exact(x) => x == p,
            Solutions::Residue { residue, modulus } => p.mod_floor(modulus) == *residue,
        }
    }

    /// The solution of least absolute value, positive on ties.
    pub fn least_absolute(&self) -> Option<BigInt> {
        match self {
            Solutions::None => None,
            Solutions::Exact(x) => Some(x.clone()),
            Solutions::Residue { residue, modulus } => {
                let neg = residue - modulus;
                if residue.abs() <= neg.abs() {
                    Some(residue.clone())
                } else {
                    Some(neg)
                }
            }
        }
    }

    /// Intersects with `{p : a·p ≡ b (mod m)}`; `m = 0` means equality.
    fn constrain(self, a: &BigInt, b: &BigInt, m: &BigInt) -> Self {
        if m.is_zero() {
            if a.is_zero() {
                return if b.is_zero() { self } else { Solutions::None };
            }
            if !b.is_multiple_of(a) {
                return Solutions::None;
            }
            let x = b / a;
            return if self.contains(&x) { Solutions::Exact(x) } else { Solutions::None };
        }
        let a = a.mod_floor(m);
        let b = b.mod_floor(m);
        let g = a.gcd(m);
        if !b.is_multiple_of(&g) {
            return Solutions::None;
        }
        let m2 = m / &g;
        if m2.is_one() {
            return self;
        }
        let inv = mod_inverse(&(&a / &g), &m2).expect("coprime after dividing by gcd");
        let r2 = ((&b / &g) * inv).mod_floor(&m2);
        match self {
            Solutions::None => Solutions::None,
            Solutions::Exact(x) => {
                if x.mod_floor(&m2) == r2 {
                    Solutions::Exact(x)
                } else {
                    Solutions::None
                }
            }
            Solutions::Residue { residue: r1, modulus: m1 } => crt(&r1, &m1, &r2, &m2),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Solutions {
    let g = m1.gcd(m2);
    let diff = r2 - r1;
    if !diff.is_multiple_of(&g) {
        return Solutions::None;
    }
    let l = m1.lcm(m2);
    let m1g = m1 / &g;
    let m2g = m2 / &g;
    // r1 + m1·k ≡ r2 (mod m2)  ⇔  (m1/g)·k ≡ diff/g (mod m2/g)
    let k = if m2g.is_one() {
        BigInt::zero()
    } else {
        ((&diff / &g) * mod_inverse(&m1g.mod_floor(&m2g), &m2g).unwrap()).mod_floor(&m2g)
    };
    Solutions::Residue { residue: (r1 + m1 * k).mod_floor(&l), modulus: l }
}

/// `Z^n / Λ` where `Λ` is spanned by the relators' exponent vectors.
#[derive(Clone, Debug)]
pub struct AbelianModel {
    generators: Vec<u8>,
    relation_rows: Vec<Vec<BigInt>>,
    smith: SmithForm,
    /// `dᵢ` for each coordinate; 0 on free coordinates.
    invariants: Vec<BigInt>,
}

impl AbelianModel {
    pub fn new(pres: &Presentation) -> Self {
        let gens = pres.generators().to_vec();
        let rows: Vec<Vec<BigInt>> = pres
            .relators()
            .iter()
            .map(|r| r.exponent_sums(&gens).into_iter().map(BigInt::from).collect())
            .collect();
        let smith = smith_normal_form(&rows, gens.len());
        let mut invariants = vec![BigInt::zero(); gens.len()];
        for (i, d) in smith.diagonal.iter().enumerate() {
            invariants[i] = d.clone();
        }
        AbelianModel { generators: gens, relation_rows: rows, smith, invariants }
    }

    /// Rank of the free abelian group the exponent map lands in.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn exponent_vector(&self, w: &Word) -> Vec<BigInt> {
        w.exponent_sums(&self.generators).into_iter().map(BigInt::from).collect()
    }

    fn to_smith_coords(&self, e: &[BigInt]) -> Vec<BigInt> {
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).fold(BigInt::zero(), |acc, i| acc + &e[i] * &self.smith.right[i][j]))
            .collect()
    }

    /// Canonical image of `w` in `⊕ Z/dᵢ ⊕ Z^k`.
    pub fn image(&self, w: &Word) -> Vec<BigInt> {
        self.to_smith_coords(&self.exponent_vector(w))
            .into_iter()
            .zip(&self.invariants)
            .map(|(y, d)| if d.is_zero() { y } else { y.mod_floor(d) })
            .collect()
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.image(w).iter().all(Zero::is_zero)
    }

    /// Integer coefficients `c` with `Σ cⱼ·e(rⱼ) = e`, when they exist.
    pub fn relator_coefficients(&self, e: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.to_smith_coords(e);
        let m = self.relation_rows.len();
        let mut c_prime = vec![BigInt::zero(); m];
        for (i, yi) in y.iter().enumerate() {
            let d = &self.invariants[i];
            if d.is_zero() {
                if !yi.is_zero() {
                    return None;
                }
            } else {
                if !yi.is_multiple_of(d) {
                    return None;
                }
                c_prime[i] = yi / d;
            }
        }
        let c = (0..m)
            .map(|j| (0..m).fold(BigInt::zero(), |acc, i| acc + &c_prime[i] * &self.smith.left[i][j]))
            .collect();
        Some(c)
    }

    /// All `p` with `w = u^p` in the abelianization.
    pub fn power_solutions(&self, w: &Word, u: &Word) -> Solutions {
        let y = self.to_smith_coords(&self.exponent_vector(w));
        let x = self.to_smith_coords(&self.exponent_vector(u));
        let mut sol = Solutions::all();
        for i in 0..self.rank() {
            sol = sol.constrain(&x[i], &y[i], &self.invariants[i]);
            if sol == Solutions::None {
                break;
            }
        }
        sol
    }

    /// Human-readable isomorphism type, e.g. `Z/3 + Z`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut free = 0;
        for d in &self.invariants {
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                parts.push(format!("Z/{d}"));
            }
        }
        if free > 0 {
            parts.push(if free == 1 { "Z".into() } else { format!("Z^{free}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

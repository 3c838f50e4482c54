use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeff::Coeff;
use crate::jets::Jet1;

/// Dense univariate polynomial with trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Coeff>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| Coeff::from_int(v)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Poly::new(vec![c])
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Coeff::zero(); k + 1];
        c[k] = Coeff::one();
        Poly { coeffs: c }
    }

    /// The polynomial part of a jet (everything up to its order).
    pub fn from_jet(j: &Jet1) -> Self {
        Poly::new(j.coeffs().to_vec())
    }

    pub fn to_jet(&self, order: usize) -> Jet1 {
        Jet1::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Coeff {
        self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Coeff {
        self.coeffs.last().cloned().unwrap_or_else(Coeff::zero)
    }

    /// Multiplicity of the root 0.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coeff::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut q = vec![Coeff::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = &rem[rem.len() - 1] * &inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(&f * c);
            }
            q[k] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(q), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Coeff::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// `p(q(z))` as a polynomial.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Yun's square-free decomposition: pairs `(factor, multiplicity)` with
    /// monic, pairwise coprime, square-free factors of positive degree.
    pub fn squarefree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut k = 1;
        loop {
            let d = c.sub(&b.derivative());
            if b.degree() == Some(0) {
                break;
            }
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), k));
            }
            b = b.div_rem(&g).0;
            c = d.div_rem(&g).0;
            a = a.div_rem(&g).0;
            k += 1;
        }
        let _ = a;
        out
    }

    /// Number of distinct roots over C.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree()
            .iter()
            .map(|(f, _)| f.degree().unwrap_or(0))
            .sum()
    }

    /// Roots lying in Q, found by the rational root test on the real part
    /// of a polynomial with rational coefficients. Returns `None` when the
    /// polynomial has non-real coefficients.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        if self.coeffs.iter().any(|c| !c.is_real()) {
            return None;
        }
        let mut out = Vec::new();
        if self.is_zero() {
            return Some(out);
        }
        let v = self.valuation().unwrap_or(0);
        if v > 0 {
            out.push(BigRational::zero());
        }
        let rest: Vec<BigRational> = self.coeffs[v..].iter().map(|c| c.re().clone()).collect();
        if rest.len() < 2 {
            return Some(out);
        }
        let den = rest
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rest
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let c0 = ints[0].abs();
        let cn = ints[ints.len() - 1].abs();
        if c0.bits() > 40 || cn.bits() > 40 {
            return Some(out);
        }
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let mut ds = Vec::new();
            let mut k = BigInt::one();
            while &k * &k <= *n {
                if (n % &k).is_zero() {
                    ds.push(k.clone());
                    ds.push(n / &k);
                }
                k += 1;
            }
            ds
        };
        let mut cands = Vec::new();
        for p in divisors(&c0) {
            for q in divisors(&cn) {
                for s in [1, -1] {
                    cands.push(BigRational::new(&p * s, q.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            if self.eval(&Coeff::from_rational(r.clone())).is_zero() {
                out.push(r);
            }
        }
        Some(out)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c_txt = c.to_string();
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let body = if mono.is_empty() {
                c_txt
            } else if c_txt == "1" {
                mono
            } else if c_txt == "-1" {
                format!("-{mono}")
            } else if !c.is_real() && !c.re().is_zero() {
                format!("({c_txt})*{mono}")
            } else {
                format!("{c_txt}*{mono}")
            };
            if out.is_empty() {
                out = body;
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl serde::Serialize for Poly {
    /// Coefficient list, constant term first.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

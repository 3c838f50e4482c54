use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Truncated power series `Σ_{k≤N} c_k z^k` in one variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Jet1 {
    coeffs: Vec<Coeff>,
}

impl Jet1 {
    pub fn zero(order: usize) -> Self {
        Jet1 {
            coeffs: vec![Coeff::zero(); order + 1],
        }
    }

    pub fn constant(c: Coeff, order: usize) -> Self {
        let mut j = Jet1::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The identity germ `z`.
    pub fn identity(order: usize) -> Self {
        Jet1::monomial(Coeff::one(), 1, order)
    }

    pub fn monomial(c: Coeff, k: usize, order: usize) -> Self {
        let mut j = Jet1::zero(order);
        if k <= order {
            j.coeffs[k] = c;
        }
        j
    }

    /// Builds a jet from the listed coefficients, padding or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Coeff>, order: usize) -> Self {
        coeffs.resize(order + 1, Coeff::zero());
        Jet1 { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Jet1::from_coeffs(coeffs.iter().map(|&c| Coeff::from_int(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Coeff {
        self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Coeff) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet1::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// Same coefficients, declared at a (possibly larger) order. Only valid
    /// when the jet is known to be a polynomial.
    pub fn with_order(&self, order: usize) -> Self {
        Jet1::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Jet1 {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Jet1) -> Jet1 {
        let n = self.order().min(other.order());
        Jet1 {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Jet1) -> Jet1 {
        let n = self.order().min(other.order());
        Jet1 {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &Jet1) -> Jet1 {
        let n = self.order().min(other.order());
        let mut out = vec![Coeff::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Jet1 { coeffs: out }
    }

    /// Reciprocal of a unit series.
    pub fn recip(&self) -> Result<Jet1> {
        let c0 = self.coeffs[0].inv().ok_or(Error::NotDivisible)?;
        let n = self.order();
        let mut out = vec![Coeff::zero(); n + 1];
        out[0] = c0.clone();
        for k in 1..=n {
            let mut acc = Coeff::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(&acc * &c0);
        }
        Ok(Jet1 { coeffs: out })
    }

    /// Quotient `q` with `q·b = a`.
    ///
    /// For a unit `b` the result has order `min(a, b)`. Otherwise `b = z^v·u`
    /// and `a` must vanish to order `v`; the quotient is then known only to
    /// order `min(a, b) − v`.
    pub fn div(&self, b: &Jet1) -> Result<Jet1> {
        let n = self.order().min(b.order());
        let v = b.valuation().ok_or(Error::NotDivisible)?;
        if v == 0 {
            return Ok(self.truncate(n).mul(&b.truncate(n).recip()?));
        }
        if (0..v.min(n + 1)).any(|k| !self.coeffs[k].is_zero()) || v > n {
            return Err(Error::NotDivisible);
        }
        let a_shift = Jet1::from_coeffs(self.coeffs[v..=n].to_vec(), n - v);
        let b_shift = Jet1::from_coeffs(b.coeffs[v..=n].to_vec(), n - v);
        Ok(a_shift.mul(&b_shift.recip()?))
    }

    /// Formal derivative; the order drops by one.
    pub fn derive(&self) -> Jet1 {
        let n = self.order();
        if n == 0 {
            return Jet1::zero(0);
        }
        Jet1 {
            coeffs: (1..=n)
                .map(|k| &self.coeffs[k] * &Coeff::from_int(k as i64))
                .collect(),
        }
    }

    /// `f ∘ g` for `g(0) = 0`, computed by Horner's rule.
    pub fn compose(&self, g: &Jet1) -> Result<Jet1> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Jet1::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of an invertible germ, coefficient by coefficient.
    pub fn comp_inverse(&self) -> Result<Jet1> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Jet1::zero(0));
        }
        let l_inv = self.coeffs[1].inv().ok_or(Error::NotInvertible)?;
        let mut g = Jet1::monomial(l_inv.clone(), 1, n);
        // f(g(z)) = z fixes the coefficient of z^k of g once lower ones are known.
        for k in 2..=n {
            let fg = self.compose(&g.truncate(k))?;
            let err = fg.coeff(k);
            g.coeffs[k] = -(&err * &l_inv);
        }
        Ok(g)
    }

    /// Evaluates the polynomial part at a coefficient.
    pub fn eval(&self, z: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }
}

impl Add for &Jet1 {
    type Output = Jet1;
    fn add(self, rhs: &Jet1) -> Jet1 {
        Jet1::add(self, rhs)
    }
}

impl Sub for &Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: &Jet1) -> Jet1 {
        Jet1::sub(self, rhs)
    }
}

impl Mul for &Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: &Jet1) -> Jet1 {
        Jet1::mul(self, rhs)
    }
}

impl Neg for &Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(&Coeff::from_int(-1))
    }
}

impl fmt::Display for Jet1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c_txt = c.to_string();
            let needs_paren = !c.is_real() && !c.re().is_zero();
            let body = match (k, c_txt.as_str()) {
                (0, _) => c_txt.clone(),
                (_, "1") => String::new(),
                (_, "-1") => "-".to_string(),
                _ if needs_paren => format!("({c_txt})*"),
                _ => format!("{c_txt}*"),
            };
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let term = format!("{body}{mono}");
            if first {
                write!(f, "{term}")?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl serde::Serialize for Jet1 {
    /// `{"order": N, "coeffs": ["c0", "c1", …]}`
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Jet1", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

impl fmt::Debug for Jet1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

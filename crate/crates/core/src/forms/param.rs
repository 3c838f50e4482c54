//! Polynomial 1-forms in `(x, y, z)` where `z` is a parameter riding along
//! the blow-ups of the `(x, y)` plane.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::coeff::Coeff;

/// Polynomial in three variables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], Coeff>,
}

impl Poly3 {
    pub fn from_terms(terms: &[([u32; 3], i64)]) -> Self {
        let mut p = Poly3::default();
        for &(e, c) in terms {
            p.add_term(e, &Coeff::from_int(c));
        }
        p
    }

    pub fn add_term(&mut self, e: [u32; 3], c: &Coeff) {
        let new = &self.terms.get(&e).cloned().unwrap_or_else(Coeff::zero) + c;
        if new.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, new);
        }
    }

    pub fn add(&self, o: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, by: [u32; 3]) -> Poly3 {
        Poly3 {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] + by[0], e[1] + by[1], e[2] + by[2]], c.clone()))
                .collect(),
        }
    }

    /// Applies a monomial substitution to the exponents.
    pub fn remap(&self, f: impl Fn([u32; 3]) -> [u32; 3]) -> Poly3 {
        let mut out = Poly3::default();
        for (e, c) in &self.terms {
            out.add_term(f(*e), c);
        }
        out
    }

    pub fn var_valuation(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sets the parameter to a value, leaving a polynomial in the first two
    /// variables.
    pub fn at_parameter(&self, z: &Coeff) -> Poly3 {
        let mut out = Poly3::default();
        for (e, c) in &self.terms {
            out.add_term([e[0], e[1], 0], &(c * &z.pow(e[2] as i64)));
        }
        out
    }

    pub fn fmt_with(&self, names: [&str; 3]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..3)
                .filter(|&k| e[k] > 0)
                .map(|k| match e[k] {
                    1 => names[k].to_string(),
                    p => format!("{}^{}", names[k], p),
                })
                .collect();
            let mono = mono.join("*");
            let c_txt = c.to_string();
            let body = match (mono.is_empty(), c_txt.as_str()) {
                (true, _) => c_txt,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                _ => format!("{c_txt}*{mono}"),
            };
            parts.push(body);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(["x", "y", "z"]))
    }
}

/// `C₀ d(v₀) + C₁ d(v₁) + C₂ dz` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Form3 {
    pub coeffs: [Poly3; 3],
    pub names: [String; 3],
}

impl Form3 {
    pub fn new(c0: Poly3, c1: Poly3, c2: Poly3) -> Self {
        Form3 {
            coeffs: [c0, c1, c2],
            names: ["x".into(), "y".into(), "z".into()],
        }
    }

    pub fn with_names(mut self, a: &str, b: &str) -> Self {
        self.names[0] = a.into();
        self.names[1] = b.into();
        self
    }

    /// Pullback by `v₁ = t·v₀`; coordinates become `(v₀, t, z)`.
    pub fn blowup_x(&self) -> Form3 {
        let sub = |p: &Poly3| p.remap(|e| [e[0] + e[1], e[1], e[2]]);
        let [c0, c1, c2] = &self.coeffs;
        let (s0, s1, s2) = (sub(c0), sub(c1), sub(c2));
        Form3 {
            coeffs: [s0.add(&s1.shift([0, 1, 0])), s1.shift([1, 0, 0]), s2],
            names: [self.names[0].clone(), "t".into(), self.names[2].clone()],
        }
    }

    /// Pullback by `v₀ = s·v₁`; coordinates become `(s, v₁, z)`.
    pub fn blowup_y(&self) -> Form3 {
        let sub = |p: &Poly3| p.remap(|e| [e[0], e[0] + e[1], e[2]]);
        let [c0, c1, c2] = &self.coeffs;
        let (s0, s1, s2) = (sub(c0), sub(c1), sub(c2));
        Form3 {
            coeffs: [s0.shift([0, 1, 0]), s0.shift([1, 0, 0]).add(&s1), s2],
            names: ["s".into(), self.names[1].clone(), self.names[2].clone()],
        }
    }

    /// Divides by the largest power of coordinate `var` dividing every coefficient.
    pub fn divide(&self, var: usize) -> (Form3, u32) {
        let k = self
            .coeffs
            .iter()
            .filter_map(|c| c.var_valuation(var))
            .min()
            .unwrap_or(0);
        let coeffs = self.coeffs.clone().map(|c| {
            c.remap(|mut e| {
                e[var] -= k;
                e
            })
        });
        (
            Form3 {
                coeffs,
                names: self.names.clone(),
            },
            k,
        )
    }

    /// Renames coordinates without touching coefficients.
    pub fn relabel(mut self, names: [&str; 3]) -> Form3 {
        self.names = names.map(String::from);
        self
    }

    pub fn at_parameter(&self, z: &Coeff) -> Form3 {
        Form3 {
            coeffs: self.coeffs.clone().map(|c| c.at_parameter(z)),
            names: self.names.clone(),
        }
    }
}

impl fmt::Display for Form3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [self.names[0].as_str(), self.names[1].as_str(), self.names[2].as_str()];
        let mut parts = Vec::new();
        for k in 0..3 {
            if !self.coeffs[k].is_zero() {
                parts.push(format!("({}) d{}", self.coeffs[k].fmt_with(names), names[k]));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for Form3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The unfolding form `b·da − a·db` of `(y² + x³ + z·x²y)/(xy)` with `z` as a
/// coordinate: `(2x³y + zx²y² − y³)dx + (xy² − x⁴)dy + x³y² dz`.
pub fn cusp_unfolding_form() -> Form3 {
    Form3::new(
        Poly3::from_terms(&[([3, 1, 0], 2), ([2, 2, 1], 1), ([0, 3, 0], -1)]),
        Poly3::from_terms(&[([1, 2, 0], 1), ([4, 0, 0], -1)]),
        Poly3::from_terms(&[([3, 2, 0], 1)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_blowup_of_unfolding() {
        let (w, k) = cusp_unfolding_form().blowup_x().divide(0);
        assert_eq!(k, 4);
        // t(1 + zt) dx + (t² − x) dt + t²x dz
        let expect = Form3::new(
            Poly3::from_terms(&[([0, 1, 0], 1), ([0, 2, 1], 1)]),
            Poly3::from_terms(&[([0, 2, 0], 1), ([1, 0, 0], -1)]),
            Poly3::from_terms(&[([1, 2, 0], 1)]),
        );
        assert_eq!(w.coeffs, expect.coeffs);
    }
}

//! Integer relations among exponent vectors.

/// Unimodular reduction of an integer vector `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    /// `gcd(m)`, non-negative.
    pub gcd: i64,
    /// Coefficients `c` with `Σ c_k m_k = gcd`.
    pub bezout: Vec<i64>,
    /// A basis of `{v ∈ Z^n : Σ v_k m_k = 0}`.
    pub relations: Vec<Vec<i64>>,
}

/// Row-reduces `m` by an accumulated unimodular matrix `U` until `U·m` has a
/// single nonzero entry. That row of `U` is a Bézout vector and the other rows
/// span the relation lattice.
pub fn relation_lattice(m: &[i64]) -> RelationLattice {
    let n = m.len();
    let mut a: Vec<i128> = m.iter().map(|&v| v as i128).collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|r| (0..n).map(|c| i128::from(r == c)).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&k| a[k] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&k| a[k].abs()).unwrap();
        for &k in &nonzero {
            if k == p {
                continue;
            }
            let q = a[k].div_euclid(a[p]);
            a[k] -= q * a[p];
            let row_p = u[p].clone();
            for (x, y) in u[k].iter_mut().zip(&row_p) {
                *x -= q * y;
            }
        }
    }
    let pivot = (0..n).find(|&k| a[k] != 0);
    let (gcd, bezout, relations) = match pivot {
        None => (0, vec![0; n], u),
        Some(p) => {
            let sign = a[p].signum();
            let bez = u[p].iter().map(|&v| v * sign).collect::<Vec<_>>();
            let rel = u
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != p)
                .map(|(_, r)| r.clone())
                .collect();
            ((a[p] * sign), bez, rel)
        }
    };
    let narrow = |v: Vec<i128>| v.into_iter().map(|x| x as i64).collect::<Vec<_>>();
    RelationLattice {
        gcd: gcd as i64,
        bezout: narrow(bezout),
        relations: relations.into_iter().map(narrow).collect(),
    }
}

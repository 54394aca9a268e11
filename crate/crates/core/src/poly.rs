//! Dense univariate polynomials over the rationals with Sturm sequences.

use crate::scalar::{int, Scalar};
use num_traits::{Signed, Zero};

/// Coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.0.last().cloned().unwrap_or_else(|| int(0))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = int(0);
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = int(0);
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&int(-1)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![int(0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    /// Remainder of division by a non-zero `d`.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k - dd + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let r = chain.last().unwrap().rem(&next).scale(&int(-1));
            chain.push(next);
            next = r;
        }
        chain
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let chain = self.sturm_chain();
        let at_neg: Vec<i8> = chain
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        let at_pos: Vec<i8> = chain.iter().map(|p| sign(&p.lead())).collect();
        sign_changes(&at_neg).saturating_sub(sign_changes(&at_pos))
    }

    /// Whether `p(t) <= 0` for some real `t`.
    pub fn has_nonpositive_value(&self) -> bool {
        if self.is_zero() || !self.eval(&int(0)).is_positive() {
            return true;
        }
        self.count_real_roots() > 0
    }
}

fn sign(x: &Scalar) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(s: &[i8]) -> usize {
    let nz: Vec<i8> = s.iter().copied().filter(|&x| x != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

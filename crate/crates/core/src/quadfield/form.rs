//! Positive definite binary quadratic forms a x² + b xy + c y².

use std::fmt;

use crate::exactalg::arith::{ext_gcd, gcd};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// The form (a, b, (b² − disc)/(4a)).
    pub fn from_ab(a: i64, b: i64, disc: i64) -> Self {
        let num = b as i128 * b as i128 - disc as i128;
        debug_assert_eq!(num % (4 * a as i128), 0, "b² ≢ disc mod 4a");
        QuadForm {
            a,
            b,
            c: (num / (4 * a as i128)) as i64,
        }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Principal form of the given discriminant.
    pub fn identity(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self::from_ab(1, b, disc)
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// Reduced representative of the proper equivalence class.
    pub fn reduce(&self) -> Self {
        let disc = self.disc();
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        let d = disc as i128;
        let cof = |a: i128, b: i128| (b * b - d) / (4 * a);
        let mut c = cof(a, b);
        loop {
            // b into (−a, a]
            if b > a || b <= -a {
                let mut r = b.rem_euclid(2 * a);
                if r > a {
                    r -= 2 * a;
                }
                b = r;
                c = cof(a, b);
            }
            if a > c {
                let t = a;
                a = c;
                c = t;
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadForm {
            a: a as i64,
            b: b as i64,
            c: c as i64,
        }
    }

    /// Form of the inverse class.
    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// Gaussian composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.disc();
        debug_assert_eq!(disc, other.disc(), "composition needs equal discriminants");
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let (g, u, _v) = ext_gcd(a2, a1);
            (u, g)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let (g, x, y) = ext_gcd(s, d);
            (x, -y, g)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc as i128) / (4 * a3);
        QuadForm {
            a: a3 as i64,
            b: b3 as i64,
            c: c3 as i64,
        }
        .reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.reduce();
        let mut acc = QuadForm::identity(self.disc());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All primitive reduced forms of a negative discriminant, sorted.
pub fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    let amax = ((-disc) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b as i128 * b as i128 - disc as i128;
            if num % (4 * a as i128) != 0 {
                continue;
            }
            let c = (num / (4 * a as i128)) as i64;
            let f = QuadForm::new(a, b, c);
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        assert_eq!(QuadForm::new(3, 7, 5).disc(), -11);
        assert_eq!(QuadForm::new(3, 7, 5).reduce(), QuadForm::new(1, 1, 3));
        assert!(QuadForm::new(2, 1, 3).is_reduced());
        assert!(!QuadForm::new(2, -2, 3).is_reduced());
        assert_eq!(QuadForm::new(2, -1, 2).reduce(), QuadForm::new(2, 1, 2));
    }

    #[test]
    fn reduced_form_counts() {
        assert_eq!(reduced_forms(-23).len(), 3);
        assert_eq!(reduced_forms(-7).len(), 1);
        assert_eq!(reduced_forms(-4).len(), 1);
        assert_eq!(reduced_forms(-3).len(), 1);
        assert_eq!(reduced_forms(-20).len(), 2);
        assert_eq!(reduced_forms(-56).len(), 4);
        // non-maximal order: disc −7·3² has class number 1·(3 − χ(3))/1 = 4 ... /[O_K^×:O^×] = 4
        assert_eq!(reduced_forms(-63).len(), 4);
    }

    #[test]
    fn composition_is_a_group_law() {
        for disc in [-23i64, -47, -56, -71, -84, -104, -151, -199, -260] {
            let forms = reduced_forms(disc);
            let e = QuadForm::identity(disc);
            for f in &forms {
                assert_eq!(f.compose(&e), *f);
                assert_eq!(f.compose(&f.inverse()), e, "disc {disc} form {f}");
                for g in &forms {
                    assert_eq!(f.compose(g), g.compose(f));
                    assert_eq!(f.compose(g).disc(), disc);
                    for h in &forms {
                        assert_eq!(f.compose(g).compose(h), f.compose(&g.compose(h)));
                    }
                }
            }
        }
    }

    #[test]
    fn composition_represents_product() {
        // coprime leading coefficients: the composite represents a1·a2
        let disc = -71;
        let f = QuadForm::new(2, 1, 9);
        let g = QuadForm::new(3, 1, 6);
        let h = f.compose(&g);
        let target = 6i128;
        let found = (-10..=10).any(|x| (-10..=10).any(|y| h.eval(x, y) == target));
        assert!(found);
        assert_eq!(h.disc(), disc);
    }
}

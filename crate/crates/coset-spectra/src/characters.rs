//! Character groups of F_q and of the nonsplit torus E^x / F^x, Gauss sums,
//! and the epsilon factors attached to the irreducible representations of
//! PGL2(F_q) of degree greater than one.
//!
//! All character values are complex doubles built from precomputed
//! root-of-unity tables. Multiplicative characters are chi_j with
//! chi_j(g^k) = zeta_{q-1}^{jk} for the fixed field generator g; additive
//! characters are psi^a(x) = psi(ax) with psi(x) = exp(2 pi i AbsTr(x) / p);
//! torus characters are Lambda_j(h^k) = zeta_{q+1}^{jk} for the fixed
//! generator h of E^x, automatically trivial on F^x.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Elem, ExtElem, ExtFieldTable, FieldTable};

pub type Cplx = Complex64;

/// Multiplicative character chi_j of F_q^x, j taken mod q-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultChar {
    pub j: u32,
}

/// Additive character psi^a of F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddChar {
    pub a: Elem,
}

/// Character Lambda_j of E^x trivial on F^x, j taken mod q+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusChar {
    pub j: u32,
}

/// Parameter of an irreducible representation of degree > 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// pi_Lambda, degree q-1. Requires Lambda^2 != 1.
    Discrete(TorusChar),
    /// pi_mu with mu^2 = 1, degree q.
    Steinberg(MultChar),
    /// pi_mu with mu^2 != 1, degree q+1.
    Principal(MultChar),
}

impl RepKind {
    pub fn degree(&self, q: u32) -> usize {
        match self {
            RepKind::Discrete(_) => (q - 1) as usize,
            RepKind::Steinberg(_) => q as usize,
            RepKind::Principal(_) => (q + 1) as usize,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RepKind::Discrete(l) => format!("discrete({})", l.j),
            RepKind::Steinberg(m) => format!("steinberg({})", m.j),
            RepKind::Principal(m) => format!("principal({})", m.j),
        }
    }
}

fn roots(n: u32) -> Vec<Cplx> {
    (0..n)
        .map(|k| Cplx::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

/// Evaluation context: the two fields plus root-of-unity tables.
pub struct Chars<'a> {
    f: &'a FieldTable,
    ext: &'a ExtFieldTable,
    zeta_p: Vec<Cplx>,
    zeta_mult: Vec<Cplx>,
    zeta_torus: Vec<Cplx>,
}

impl<'a> Chars<'a> {
    pub fn new(f: &'a FieldTable, ext: &'a ExtFieldTable) -> Chars<'a> {
        Chars {
            f,
            ext,
            zeta_p: roots(f.p()),
            zeta_mult: roots(f.q() - 1),
            zeta_torus: roots(f.q() + 1),
        }
    }

    pub fn field(&self) -> &FieldTable {
        self.f
    }
    pub fn ext(&self) -> &ExtFieldTable {
        self.ext
    }
    fn q(&self) -> u32 {
        self.f.q()
    }

    pub fn trivial_mult(&self) -> MultChar {
        MultChar { j: 0 }
    }
    /// The quadratic character nu = chi_{(q-1)/2}.
    pub fn quadratic(&self) -> MultChar {
        MultChar {
            j: (self.q() - 1) / 2,
        }
    }
    pub fn mult_inv(&self, chi: MultChar) -> MultChar {
        MultChar {
            j: (self.q() - 1 - chi.j % (self.q() - 1)) % (self.q() - 1),
        }
    }
    pub fn mult_mul(&self, a: MultChar, b: MultChar) -> MultChar {
        MultChar {
            j: (a.j + b.j) % (self.q() - 1),
        }
    }
    pub fn mult_is_trivial(&self, chi: MultChar) -> bool {
        chi.j % (self.q() - 1) == 0
    }
    pub fn mult_is_quadratic(&self, chi: MultChar) -> bool {
        !self.mult_is_trivial(chi) && (2 * chi.j) % (self.q() - 1) == 0
    }

    pub fn torus_conj(&self, l: TorusChar) -> TorusChar {
        TorusChar {
            j: (self.q() + 1 - l.j % (self.q() + 1)) % (self.q() + 1),
        }
    }
    /// Admissible discrete-series parameter: Lambda^2 != 1.
    pub fn torus_is_admissible(&self, l: TorusChar) -> bool {
        (2 * l.j) % (self.q() + 1) != 0
    }

    pub fn mult_chars(&self) -> impl Iterator<Item = MultChar> {
        (0..self.q() - 1).map(|j| MultChar { j })
    }
    pub fn add_chars(&self) -> impl Iterator<Item = AddChar> {
        (0..self.q()).map(|a| AddChar { a })
    }
    pub fn nontrivial_add_chars(&self) -> impl Iterator<Item = AddChar> {
        (1..self.q()).map(|a| AddChar { a })
    }
    pub fn torus_chars(&self) -> impl Iterator<Item = TorusChar> {
        (0..self.q() + 1).map(|j| TorusChar { j })
    }

    pub fn eval_mult(&self, chi: MultChar, x: Elem) -> Result<Cplx> {
        let k = self.f.dlog(x).ok_or(Error::EvalAtZero)?;
        let n = self.q() - 1;
        Ok(self.zeta_mult[((chi.j as u64 * k as u64) % n as u64) as usize])
    }

    /// chi extended by chi(0) = 0, as used for the quadratic character.
    pub fn eval_mult0(&self, chi: MultChar, x: Elem) -> Cplx {
        match self.f.dlog(x) {
            None => Cplx::new(0.0, 0.0),
            Some(k) => {
                let n = self.q() - 1;
                self.zeta_mult[((chi.j as u64 * k as u64) % n as u64) as usize]
            }
        }
    }

    pub fn eval_add(&self, psi: AddChar, x: Elem) -> Cplx {
        self.zeta_p[self.f.abs_trace(self.f.mul(psi.a, x)) as usize]
    }

    pub fn eval_torus(&self, l: TorusChar, z: ExtElem) -> Result<Cplx> {
        let k = self.ext.dlog(z).ok_or(Error::EvalAtZero)?;
        let n = self.q() + 1;
        Ok(self.zeta_torus[((l.j as u64 * k as u64) % n as u64) as usize])
    }

    /// Gauss sum over F_q^x of chi(x) psi(x).
    pub fn gauss_sum(&self, chi: MultChar, psi: AddChar) -> Result<Cplx> {
        if psi.a == 0 {
            return Err(Error::TrivialPsi);
        }
        let mut s = Cplx::new(0.0, 0.0);
        for x in self.f.units() {
            s += self.eval_mult(chi, x).unwrap() * self.eval_add(psi, x);
        }
        Ok(s)
    }

    /// Gauss sum over E^x of Lambda(z) chi(norm z) psi(trace z).
    pub fn gauss_sum_ext(&self, l: TorusChar, chi: MultChar, psi: AddChar) -> Result<Cplx> {
        if psi.a == 0 {
            return Err(Error::TrivialPsi);
        }
        let mut s = Cplx::new(0.0, 0.0);
        for z in self.ext.units() {
            let val = self.eval_torus(l, z).unwrap()
                * self.eval_mult(chi, self.ext.norm(z)).unwrap()
                * self.eval_add(psi, self.ext.trace(z));
            s += val;
        }
        Ok(s)
    }

    /// Validate a representation parameter.
    pub fn check_rep_kind(&self, kind: RepKind) -> Result<()> {
        match kind {
            RepKind::Discrete(l) => {
                if !self.torus_is_admissible(l) {
                    return Err(Error::InvalidParam(format!(
                        "discrete series needs Lambda^2 != 1, got j = {}",
                        l.j
                    )));
                }
            }
            RepKind::Steinberg(m) => {
                if !(self.mult_is_trivial(m) || self.mult_is_quadratic(m)) {
                    return Err(Error::InvalidParam(format!(
                        "Steinberg needs mu^2 = 1, got j = {}",
                        m.j
                    )));
                }
            }
            RepKind::Principal(m) => {
                if self.mult_is_trivial(m) || self.mult_is_quadratic(m) {
                    return Err(Error::InvalidParam(format!(
                        "principal series needs mu^2 != 1, got j = {}",
                        m.j
                    )));
                }
            }
        }
        Ok(())
    }

    /// The epsilon factor attached to a representation:
    /// -Gamma(Lambda chi o N, psi o tr) for discrete series,
    /// Gamma(mu chi, psi) Gamma(mu^-1 chi, psi) otherwise.
    pub fn epsilon(&self, kind: RepKind, chi: MultChar, psi: AddChar) -> Result<Cplx> {
        if psi.a == 0 {
            return Err(Error::TrivialPsi);
        }
        self.check_rep_kind(kind)?;
        match kind {
            RepKind::Discrete(l) => Ok(-self.gauss_sum_ext(l, chi, psi)?),
            RepKind::Steinberg(m) | RepKind::Principal(m) => Ok(self
                .gauss_sum(self.mult_mul(m, chi), psi)?
                * self.gauss_sum(self.mult_mul(self.mult_inv(m), chi), psi)?),
        }
    }

    /// Sum of Lambda(1+z) over norm-one z != -1; equals -Lambda(sqrt(delta)),
    /// which is +1 or -1.
    pub fn norm_one_sum(&self, l: TorusChar) -> Result<Cplx> {
        if !self.torus_is_admissible(l) {
            return Err(Error::InvalidParam(format!("Lambda^2 = 1 for j = {}", l.j)));
        }
        let minus_one = self.ext.embed(self.f.neg(1));
        let mut s = Cplx::new(0.0, 0.0);
        for &z in self.ext.norm_one() {
            if z == minus_one {
                continue;
            }
            s += self
                .eval_torus(l, self.ext.add(self.ext.embed(1), z))
                .unwrap();
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, e: u32) -> (FieldTable, ExtFieldTable) {
        let f = FieldTable::build(p, e).unwrap();
        let ext = ExtFieldTable::build(&f, f.find_nonsquare()).unwrap();
        (f, ext)
    }

    fn close(a: Cplx, b: Cplx, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn trivial_and_quadratic_values() {
        let (f, ext) = ctx(5, 1);
        let ch = Chars::new(&f, &ext);
        for x in f.units() {
            assert!(close(
                ch.eval_mult(ch.trivial_mult(), x).unwrap(),
                Cplx::new(1.0, 0.0),
                1e-12
            ));
        }
        // 2 generates F_5^x, nu = chi_2: nu(4) = +1, nu(2) = -1
        let nu = ch.quadratic();
        assert!(close(
            ch.eval_mult(nu, 4).unwrap(),
            Cplx::new(1.0, 0.0),
            1e-12
        ));
        assert!(close(
            ch.eval_mult(nu, 2).unwrap(),
            Cplx::new(-1.0, 0.0),
            1e-12
        ));
        assert!(matches!(ch.eval_mult(nu, 0), Err(Error::EvalAtZero)));
        assert_eq!(ch.eval_mult0(nu, 0), Cplx::new(0.0, 0.0));
    }

    #[test]
    fn orthogonality() {
        for (p, e) in [(3u32, 1u32), (5, 1), (3, 2)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            let q = f.q();
            for chi in ch.mult_chars() {
                let s: Cplx = f.units().map(|x| ch.eval_mult(chi, x).unwrap()).sum();
                let expected = if chi.j == 0 { (q - 1) as f64 } else { 0.0 };
                assert!(
                    close(s, Cplx::new(expected, 0.0), 1e-9),
                    "sum chi_{} = {s}",
                    chi.j
                );
            }
            for a in 0..q {
                for b in 0..q {
                    let s: Cplx = f
                        .elements()
                        .map(|x| {
                            ch.eval_add(AddChar { a }, x) * ch.eval_add(AddChar { a: b }, f.neg(x))
                        })
                        .sum();
                    let expected = if a == b { q as f64 } else { 0.0 };
                    assert!(close(s, Cplx::new(expected, 0.0), 1e-9));
                }
            }
        }
    }

    #[test]
    fn torus_chars_trivial_on_base_units() {
        let (f, ext) = ctx(5, 1);
        let ch = Chars::new(&f, &ext);
        for l in ch.torus_chars() {
            for x in f.units() {
                let v = ch.eval_torus(l, ext.embed(x)).unwrap();
                assert!(close(v, Cplx::new(1.0, 0.0), 1e-12));
            }
            let v = ch.eval_torus(l, ext.generator()).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_sum_values() {
        let (f, ext) = ctx(3, 1);
        let ch = Chars::new(&f, &ext);
        let psi = AddChar { a: 1 };
        // Gamma(1, psi) = -1
        assert!(close(
            ch.gauss_sum(ch.trivial_mult(), psi).unwrap(),
            Cplx::new(-1.0, 0.0),
            1e-12
        ));
        // q = 3: Gamma(nu, psi) = e^{2 pi i/3} - e^{4 pi i/3} = i sqrt(3)
        let g = ch.gauss_sum(ch.quadratic(), psi).unwrap();
        assert!(close(g, Cplx::new(0.0, 3f64.sqrt()), 1e-12));
        assert!(matches!(
            ch.gauss_sum(ch.quadratic(), AddChar { a: 0 }),
            Err(Error::TrivialPsi)
        ));
    }

    #[test]
    fn gauss_sum_magnitudes() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            let q = f.q() as f64;
            for psi in ch.nontrivial_add_chars() {
                for chi in ch.mult_chars() {
                    let g = ch.gauss_sum(chi, psi).unwrap();
                    if chi.j == 0 {
                        assert!(close(g, Cplx::new(-1.0, 0.0), 1e-9));
                    } else {
                        assert!(
                            (g.norm_sqr() - q).abs() < 1e-8,
                            "|Gamma|^2 = q at q={q} j={}",
                            chi.j
                        );
                    }
                }
                if f.q() > 5 {
                    break; // full psi sweep only at tiny q
                }
            }
        }
    }

    #[test]
    fn ext_gauss_sum_identity_and_magnitude() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            let q = f.q();
            let psi = AddChar { a: 1 };
            for l in ch.torus_chars().filter(|&l| ch.torus_is_admissible(l)) {
                // Gamma(Lambda, psi o tr) = q Lambda(sqrt(delta))
                let g = ch.gauss_sum_ext(l, ch.trivial_mult(), psi).unwrap();
                let expected = ch.eval_torus(l, ext.sqrt_delta()).unwrap() * q as f64;
                assert!(close(g, expected, 1e-8), "q={q} j={}", l.j);
            }
            // |Gamma| = q whenever Lambda * (chi o norm) is nontrivial; the
            // product is trivial exactly for (chi, Lambda) = (1, 1) and
            // (nu, Lambda_{(q+1)/2}), since nu o norm is the order-2 torus
            // character
            for l in ch.torus_chars() {
                for chi in ch.mult_chars() {
                    let product_trivial =
                        (chi.j == 0 && l.j == 0) || (chi == ch.quadratic() && l.j == (q + 1) / 2);
                    let g = ch.gauss_sum_ext(l, chi, psi).unwrap();
                    if product_trivial {
                        assert!(close(g, Cplx::new(-1.0, 0.0), 1e-8));
                    } else {
                        assert!((g.norm() - q as f64).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn ext_gauss_sum_conjugate_symmetry() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            let psi = AddChar { a: 1 };
            for l in ch.torus_chars() {
                for chi in ch.mult_chars() {
                    // conjugating the value conjugates both inputs
                    let a = ch.gauss_sum_ext(l, chi, psi).unwrap();
                    let b = ch
                        .gauss_sum_ext(ch.torus_conj(l), ch.mult_inv(chi), psi)
                        .unwrap();
                    assert!(close(a.conj(), b, 1e-9), "conjugate pair");
                }
            }
        }
    }

    #[test]
    fn epsilon_factor_identities() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            let q = f.q() as f64;
            let psi = AddChar { a: 1 };
            let one = ch.trivial_mult();

            // eps(pi_1, 1, psi) = Gamma(1,psi)^2 = 1
            let st1 = RepKind::Steinberg(one);
            assert!(close(
                ch.epsilon(st1, one, psi).unwrap(),
                Cplx::new(1.0, 0.0),
                1e-10
            ));

            // principal: eps(pi,mu,psi) eps(pi,mu^-1,psi) = q
            for mu in ch.mult_chars() {
                if ch.mult_is_trivial(mu) || ch.mult_is_quadratic(mu) {
                    continue;
                }
                let pi = RepKind::Principal(mu);
                let prod = ch.epsilon(pi, mu, psi).unwrap()
                    * ch.epsilon(pi, ch.mult_inv(mu), psi).unwrap();
                assert!(close(prod, Cplx::new(q, 0.0), 1e-8));
                // symmetry under mu <-> mu^-1
                for chi in ch.mult_chars() {
                    let a = ch.epsilon(pi, chi, psi).unwrap();
                    let b = ch
                        .epsilon(RepKind::Principal(ch.mult_inv(mu)), chi, psi)
                        .unwrap();
                    assert!(close(a, b, 1e-9));
                }
            }

            // discrete: |eps| = q, symmetry under Lambda <-> conj
            for l in ch.torus_chars().filter(|&l| ch.torus_is_admissible(l)) {
                let pi = RepKind::Discrete(l);
                let e0 = ch.epsilon(pi, one, psi).unwrap();
                assert!((e0.norm() - q).abs() < 1e-8);
                for chi in ch.mult_chars() {
                    let a = ch.epsilon(pi, chi, psi).unwrap();
                    let b = ch
                        .epsilon(RepKind::Discrete(ch.torus_conj(l)), chi, psi)
                        .unwrap();
                    assert!(close(a, b, 1e-9));
                }
            }
        }
    }

    #[test]
    fn epsilon_rejects_bad_params() {
        let (f, ext) = ctx(5, 1);
        let ch = Chars::new(&f, &ext);
        let psi = AddChar { a: 1 };
        // Lambda^2 = 1 rejected for discrete
        assert!(ch
            .epsilon(
                RepKind::Discrete(TorusChar { j: 0 }),
                ch.trivial_mult(),
                psi
            )
            .is_err());
        assert!(ch
            .epsilon(
                RepKind::Discrete(TorusChar { j: 3 }),
                ch.trivial_mult(),
                psi
            )
            .is_err());
        // mu^2 != 1 rejected for Steinberg
        assert!(ch
            .epsilon(
                RepKind::Steinberg(MultChar { j: 1 }),
                ch.trivial_mult(),
                psi
            )
            .is_err());
        // mu^2 = 1 rejected for principal
        assert!(ch
            .epsilon(RepKind::Principal(ch.quadratic()), ch.trivial_mult(), psi)
            .is_err());
    }

    #[test]
    fn norm_one_sum_is_sign() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let (f, ext) = ctx(p, e);
            let ch = Chars::new(&f, &ext);
            for l in ch.torus_chars().filter(|&l| ch.torus_is_admissible(l)) {
                let s = ch.norm_one_sum(l).unwrap();
                let expected = -ch.eval_torus(l, ext.sqrt_delta()).unwrap();
                assert!(
                    close(s, expected, 1e-10),
                    "norm-one sum = -Lambda(sqrt(delta))"
                );
                assert!((s.im).abs() < 1e-10);
                assert!((s.re.abs() - 1.0).abs() < 1e-10, "value is +-1");
            }
        }
    }

    #[test]
    fn q3_norm_one_sum_direct() {
        // q=3, Lambda = Lambda_1: enumerate the 3 terms by hand via the kernel
        let (f, ext) = ctx(3, 1);
        let ch = Chars::new(&f, &ext);
        let minus_one = ext.embed(f.neg(1));
        let mut direct = Cplx::new(0.0, 0.0);
        for &z in ext.norm_one() {
            if z != minus_one {
                direct += ch
                    .eval_torus(TorusChar { j: 1 }, ext.add(ext.embed(1), z))
                    .unwrap();
            }
        }
        let s = ch.norm_one_sum(TorusChar { j: 1 }).unwrap();
        assert!(close(s, direct, 1e-12));
    }
}

//! Arithmetic tables for F_q = F_p^e (p odd) and its quadratic extension
//! E = F_q(sqrt(delta)).
//!
//! Elements of F_q are the integers 0..q-1; the base-p digits of an index are
//! the coefficients of the corresponding polynomial residue, so 0 is the zero
//! element and constants are their own index. Multiplication goes through
//! discrete-log tables, addition through digit arithmetic. The extension
//! field stores pairs (u, v) for u + v*sqrt(delta) packed as u + q*v, with
//! its own log/exp tables of size q^2 - 1.

use crate::error::{Error, Result};

/// An element of F_q, encoded as an index in 0..q-1.
pub type Elem = u32;

/// An element of the quadratic extension, packed as u + q*v.
pub type ExtElem = u32;

/// Default cap on q; extension tables hold q^2 entries.
pub const FIELD_CAP: u32 = 1 << 14;

#[derive(Clone)]
pub struct FieldTable {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
    abs_trace: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomial arithmetic over F_p, used only while building tables ---

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += (x as u64) * (y as u64);
        }
    }
    let mut out: Vec<u32> = out.iter().map(|&v| (v % p as u64) as u32).collect();
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dm;
        for i in 0..m.len() {
            let idx = shift + i;
            let sub = (lead as u64 * m[i] as u64) % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(base: &[u32], mut n: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while n > 0 {
        if n & 1 == 1 {
            result = poly_mulmod(&result, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        n >>= 1;
    }
    result
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // make y monic so poly_rem applies
        let lead = *y.last().unwrap();
        let inv = mod_inv(lead, p);
        let monic: Vec<u32> = y
            .iter()
            .map(|&c| (c as u64 * inv as u64 % p as u64) as u32)
            .collect();
        let r = poly_rem(&x, &monic, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime, a != 0
    let mut result = 1u64;
    let mut b = a as u64 % p as u64;
    let mut n = p as u64 - 2;
    while n > 0 {
        if n & 1 == 1 {
            result = result * b % p as u64;
        }
        b = b * b % p as u64;
        n >>= 1;
    }
    result as u32
}

/// Rabin irreducibility test for a monic polynomial of degree e over F_p.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = (m.len() - 1) as u32;
    let x = vec![0u32, 1];
    // x^(p^e) == x mod m
    let xq = poly_powmod(&x, (p as u64).pow(e), m, p);
    if xq != x {
        return false;
    }
    for r in prime_factors(e as u64) {
        let k = e as u64 / r;
        let mut t = poly_powmod(&x, (p as u64).pow(k as u32), m, p);
        // t - x
        while t.len() < 2 {
            t.push(0);
        }
        t[1] = (t[1] + p - 1) % p;
        poly_trim(&mut t);
        let g = poly_gcd(m, &t, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldTable {
    /// Build F_{p^e} with the default size cap.
    pub fn build(p: u32, e: u32) -> Result<FieldTable> {
        FieldTable::build_capped(p, e, FIELD_CAP)
    }

    pub fn build_capped(p: u32, e: u32, cap: u32) -> Result<FieldTable> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if e == 0 {
            return Err(Error::InvalidInput(
                "extension degree must be positive".into(),
            ));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > cap as u64 {
            return Err(Error::CapExceeded(q, cap as u64));
        }
        let q = q as u32;

        // lexicographically smallest monic irreducible of degree e:
        // scan the non-leading coefficient vector as a base-p integer
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            'outer: for low in 0..q {
                let mut m: Vec<u32> = FieldTable::digits_of(low, p, e);
                m.push(1);
                if is_irreducible(&m, p) {
                    found = Some(m);
                    break 'outer;
                }
            }
            found.expect("an irreducible polynomial of each degree exists")
        };

        let to_poly = |idx: u32| -> Vec<u32> {
            let mut v = FieldTable::digits_of(idx, p, e);
            poly_trim(&mut v);
            v
        };
        let from_poly = |poly: &[u32]| -> u32 {
            let mut idx = 0u32;
            for &c in poly.iter().rev() {
                idx = idx * p + c;
            }
            idx
        };
        let raw_mul = |a: u32, b: u32| -> u32 {
            from_poly(&poly_mulmod(&to_poly(a), &to_poly(b), &modulus, p))
        };
        let raw_pow = |a: u32, mut n: u64| -> u32 {
            let mut result = 1u32;
            let mut b = a;
            while n > 0 {
                if n & 1 == 1 {
                    result = raw_mul(result, b);
                }
                b = raw_mul(b, b);
                n >>= 1;
            }
            result
        };

        // smallest-index generator of the unit group
        let unit_factors = prime_factors(q as u64 - 1);
        let mut generator = 0;
        for cand in 2..q {
            if unit_factors
                .iter()
                .all(|&r| raw_pow(cand, (q as u64 - 1) / r) != 1)
            {
                generator = cand;
                break;
            }
        }
        assert!(generator != 0, "F_q^x is cyclic, a generator exists");

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for k in 0..(q - 1) as usize {
            exp[k] = cur;
            log[cur as usize] = k as u32;
            cur = raw_mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        // absolute trace to F_p: x + x^p + ... + x^(p^(e-1))
        let mut abs_trace = vec![0u32; q as usize];
        for x in 0..q {
            let mut acc_poly = vec![0u32];
            let mut frob = x;
            for _ in 0..e {
                let mut fp = to_poly(frob);
                if acc_poly.len() < fp.len() {
                    std::mem::swap(&mut acc_poly, &mut fp);
                }
                for (i, &c) in fp.iter().enumerate() {
                    acc_poly[i] = (acc_poly[i] + c) % p;
                }
                frob = raw_pow(frob, p as u64);
            }
            poly_trim(&mut acc_poly);
            let t = from_poly(&acc_poly);
            debug_assert!(t < p, "absolute trace lands in the prime field");
            abs_trace[x as usize] = t;
        }

        Ok(FieldTable {
            p,
            e,
            q,
            modulus,
            generator,
            exp,
            log,
            abs_trace,
        })
    }

    fn digits_of(mut n: u32, p: u32, e: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(e as usize);
        for _ in 0..e {
            v.push(n % p);
            n /= p;
        }
        v
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Coefficients of the monic modulus, ascending degree.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut out, mut mul) = (0u32, 1u32);
        let (mut x, mut y) = (a, b);
        for _ in 0..self.e {
            out += (x % self.p + y % self.p) % self.p * mul;
            x /= self.p;
            y /= self.p;
            mul *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let (mut out, mut mul) = (0u32, 1u32);
        let mut x = a;
        for _ in 0..self.e {
            out += (self.p - x % self.p) % self.p * mul;
            x /= self.p;
            mul *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Ok(self.exp[k as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let k = (self.log[a as usize] as u64 * (n % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    /// Discrete log base the generator; None for zero.
    pub fn dlog(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    pub fn exp_gen(&self, k: u32) -> Elem {
        self.exp[(k % (self.q - 1)) as usize]
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.log[a as usize] % 2 == 0
    }

    /// The fixed nonsquare used for the quadratic extension: the generator,
    /// which is never a square in odd characteristic.
    pub fn find_nonsquare(&self) -> Elem {
        self.generator
    }

    /// Absolute trace F_q -> F_p, returned as an integer below p.
    pub fn abs_trace(&self, a: Elem) -> u32 {
        self.abs_trace[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.q
    }
}

#[derive(Clone)]
pub struct ExtFieldTable {
    base: FieldTable,
    delta: Elem,
    generator: ExtElem,
    exp: Vec<ExtElem>,
    log: Vec<u32>,
    norm_one: Vec<ExtElem>,
}

impl ExtFieldTable {
    pub fn build(f: &FieldTable, delta: Elem) -> Result<ExtFieldTable> {
        if delta == 0 || f.is_square(delta) {
            return Err(Error::DeltaIsSquare(delta));
        }
        let q = f.q();
        let qq = q as u64 * q as u64;

        let raw_mul = |x: ExtElem, y: ExtElem| -> ExtElem {
            let (u1, v1) = (x % q, x / q);
            let (u2, v2) = (y % q, y / q);
            let u = f.add(f.mul(u1, u2), f.mul(delta, f.mul(v1, v2)));
            let v = f.add(f.mul(u1, v2), f.mul(u2, v1));
            u + q * v
        };
        let raw_pow = |x: ExtElem, mut n: u64| -> ExtElem {
            let mut result = 1u32;
            let mut b = x;
            while n > 0 {
                if n & 1 == 1 {
                    result = raw_mul(result, b);
                }
                b = raw_mul(b, b);
                n >>= 1;
            }
            result
        };

        let order = qq - 1;
        let factors = prime_factors(order);
        let mut generator = 0;
        for cand in 2..qq as u32 {
            if factors.iter().all(|&r| raw_pow(cand, order / r) != 1) {
                generator = cand;
                break;
            }
        }
        assert!(generator != 0);

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![NO_LOG; qq as usize];
        let mut cur = 1u32;
        for k in 0..order as usize {
            exp[k] = cur;
            log[cur as usize] = k as u32;
            cur = raw_mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        // kernel of the norm: generated by h^(q-1), q+1 elements
        let norm_one: Vec<ExtElem> = (0..=q)
            .map(|m| exp[(m as u64 * (q as u64 - 1) % order) as usize])
            .collect();

        Ok(ExtFieldTable {
            base: f.clone(),
            delta,
            generator,
            exp,
            log,
            norm_one,
        })
    }

    pub fn base(&self) -> &FieldTable {
        &self.base
    }
    pub fn q(&self) -> u32 {
        self.base.q()
    }
    pub fn delta(&self) -> Elem {
        self.delta
    }
    pub fn generator(&self) -> ExtElem {
        self.generator
    }

    pub fn make(&self, u: Elem, v: Elem) -> ExtElem {
        u + self.q() * v
    }
    pub fn parts(&self, z: ExtElem) -> (Elem, Elem) {
        (z % self.q(), z / self.q())
    }
    /// sqrt(delta) itself, the pair (0, 1).
    pub fn sqrt_delta(&self) -> ExtElem {
        self.q()
    }
    /// Image of a base-field element.
    pub fn embed(&self, a: Elem) -> ExtElem {
        a
    }

    pub fn add(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        let (u1, v1) = self.parts(x);
        let (u2, v2) = self.parts(y);
        self.make(self.base.add(u1, u2), self.base.add(v1, v2))
    }

    pub fn neg(&self, x: ExtElem) -> ExtElem {
        let (u, v) = self.parts(x);
        self.make(self.base.neg(u), self.base.neg(v))
    }

    pub fn mul(&self, x: ExtElem, y: ExtElem) -> ExtElem {
        if x == 0 || y == 0 {
            return 0;
        }
        let order = self.exp.len() as u64;
        let k = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % order;
        self.exp[k as usize]
    }

    pub fn inv(&self, x: ExtElem) -> Result<ExtElem> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.exp.len() as u64;
        let k = (order - self.log[x as usize] as u64) % order;
        Ok(self.exp[k as usize])
    }

    pub fn pow(&self, x: ExtElem, n: u64) -> ExtElem {
        if x == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let order = self.exp.len() as u64;
        let k = (self.log[x as usize] as u64 * (n % order)) % order;
        self.exp[k as usize]
    }

    pub fn dlog(&self, x: ExtElem) -> Option<u32> {
        if x == 0 {
            None
        } else {
            Some(self.log[x as usize])
        }
    }

    /// Galois conjugate z^q = u - v*sqrt(delta).
    pub fn conj(&self, z: ExtElem) -> ExtElem {
        let (u, v) = self.parts(z);
        self.make(u, self.base.neg(v))
    }

    /// Norm to the base field: u^2 - delta v^2.
    pub fn norm(&self, z: ExtElem) -> Elem {
        let (u, v) = self.parts(z);
        self.base.sub(
            self.base.mul(u, u),
            self.base.mul(self.delta, self.base.mul(v, v)),
        )
    }

    /// Trace to the base field: 2u.
    pub fn trace(&self, z: ExtElem) -> Elem {
        let (u, _) = self.parts(z);
        self.base.add(u, u)
    }

    /// The q+1 elements of norm 1.
    pub fn norm_one(&self) -> &[ExtElem] {
        &self.norm_one
    }

    pub fn units(&self) -> impl Iterator<Item = ExtElem> + '_ {
        self.exp.iter().copied()
    }

    /// All units with the given norm; empty for norm 0. O(q) per call.
    pub fn norm_fiber(&self, y: Elem) -> Vec<ExtElem> {
        if y == 0 {
            return Vec::new();
        }
        // norm(h^k) = (h^(q+1))^k, and h^(q+1) generates the base units
        let q = self.q() as u64;
        let order = self.exp.len() as u64;
        let g_norm = self.norm(self.generator);
        let base_log = self.base.dlog(y).unwrap();
        let gn_log = self.base.dlog(g_norm).unwrap();
        // solve k*gn_log = base_log mod q-1; gn_log is a unit mod q-1
        let inv = mod_inv_u64(gn_log as u64, q - 1);
        let k0 = base_log as u64 * inv % (q - 1);
        (0..=self.q())
            .map(|m| self.exp[((k0 + m as u64 * (q - 1)) % order) as usize])
            .collect()
    }

    /// Buckets of units keyed by (norm, trace); each bucket has at most two
    /// elements (roots of X^2 - t X + n). O(q^2) time and memory.
    pub fn norm_trace_buckets(&self) -> NormTraceIndex {
        let q = self.q();
        let mut buckets = vec![Vec::new(); (q as usize) * (q as usize)];
        for &z in &self.exp {
            let n = self.norm(z);
            let t = self.trace(z);
            buckets[(n + q * t) as usize].push(z);
        }
        NormTraceIndex { q, buckets }
    }
}

fn mod_inv_u64(a: u64, m: u64) -> u64 {
    // extended Euclid; gcd(a, m) must be 1
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1);
    (old_s.rem_euclid(m as i128)) as u64
}

/// Units of E indexed by (norm, trace) pairs.
pub struct NormTraceIndex {
    q: u32,
    buckets: Vec<Vec<ExtElem>>,
}

impl NormTraceIndex {
    pub fn get(&self, norm: Elem, trace: Elem) -> &[ExtElem] {
        &self.buckets[(norm + self.q * trace) as usize]
    }
}

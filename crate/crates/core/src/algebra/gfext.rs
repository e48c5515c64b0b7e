//! Finite fields `F_{p^m}` with log/antilog tables, and the few polynomial
//! operations over them needed to count roots.

/// `F_{p^m}` realized as `F_p[x]/(f)` for a primitive polynomial `f`.
///
/// An element is encoded as the integer `sum c_i p^i` of its coefficient
/// vector, so `0..p` encode the prime field itself.
#[derive(Clone, Debug)]
pub struct GfExt {
    p: u64,
    degree: u32,
    order: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GfExt {
    /// Builds the tables. The search tries monic polynomials in increasing
    /// encoding order and keeps the first one for which `x` generates the
    /// multiplicative group.
    pub fn new(p: u64, degree: u32) -> GfExt {
        assert!(degree >= 1);
        let order = p.pow(degree);
        assert!(order <= u32::MAX as u64, "field too large for the table encoding");
        let m = degree as usize;
        for code in 1..order {
            let low = digits(code, p, m);
            if low[0] == 0 {
                continue;
            }
            if let Some(exp) = cycle(p, &low, order) {
                let mut log = vec![0u32; order as usize];
                for (k, &e) in exp.iter().enumerate() {
                    log[e as usize] = k as u32;
                }
                return GfExt { p, degree, order, exp, log };
            }
        }
        unreachable!("a primitive polynomial exists for every degree")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.order - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let k = (self.order - 1 - self.log[a as usize] as u64) % (self.order - 1);
        self.exp[k as usize]
    }

    /// Evaluates a polynomial with coefficients in the prime field.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c as u32))
    }

    /// Number of distinct roots in the field of a polynomial given by its
    /// coefficients (constant term first). The zero polynomial has every
    /// element as a root.
    pub fn count_roots(&self, poly: &[u32]) -> u64 {
        let g = self.trim(poly.to_vec());
        match g.len() {
            0 => self.order,
            1 => 0,
            _ => {
                // deg gcd(g, y^Q - y) counts the distinct roots.
                let mut h = self.pow_mod(&[0, 1], self.order, &g);
                h.resize(h.len().max(2), 0);
                h[1] = self.sub(h[1], 1);
                let h = self.trim(h);
                let d = self.gcd(g, h);
                (d.len() - 1) as u64
            }
        }
    }

    fn trim(&self, mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        out
    }

    fn poly_rem(&self, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut r = self.trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = self.mul(r[top], lead_inv);
            for (i, &mi) in m.iter().enumerate() {
                let k = top - dm + i;
                r[k] = self.sub(r[k], self.mul(c, mi));
            }
            r = self.trim(r);
        }
        r
    }

    fn pow_mod(&self, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_rem(&self.poly_mul(&acc, &b), m);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), m);
            e >>= 1;
        }
        acc
    }

    fn gcd(&self, mut a: Vec<u32>, mut b: Vec<u32>) -> Vec<u32> {
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }
}

fn digits(mut code: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = vec![0u64; m];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

/// Powers of `x` modulo `x^m + sum low_i x^i`, if `x` has order `p^m - 1`.
fn cycle(p: u64, low: &[u64], order: u64) -> Option<Vec<u32>> {
    let m = low.len();
    let mut cur = vec![0u64; m];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(order as usize - 1);
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32;
    for k in 0..order - 1 {
        let code = encode(&cur);
        if k > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        // Multiply by x and reduce with x^m = -sum low_i x^i.
        let top = cur[m - 1];
        for i in (1..m).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..m {
            cur[i] = (cur[i] + (p - low[i]) * top) % p;
        }
    }
    (encode(&cur) == 1).then_some(exp)
}

//! Finite fields `F_{l^m}` by log/antilog tables.
//!
//! An element is a `u32` index whose base-`l` digits are the coefficients of
//! a polynomial in `X` modulo a primitive polynomial, so `X` generates the
//! multiplicative group. Prime-field elements `0..l` keep their integer value.

use crate::arith::prime_power;
use crate::error::{Error, Result};

pub type Elem = u32;

#[derive(Debug, Clone)]
pub struct FiniteField {
    char_: u32,
    degree: u32,
    order: u32,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(order: u64) -> Result<Self> {
        let (l, m) = prime_power(order).ok_or(Error::BadFieldDescriptor(order.to_string()))?;
        let (l, m, q) = (l as u32, m, order as u32);
        let modulus = (0..l.pow(m))
            .map(|low| monic(low, l, m))
            .find(|f| x_is_primitive(f, l, q))
            .expect("primitive polynomials exist in every degree");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u32; m as usize];
        cur[0] = 1;
        for k in 0..q - 1 {
            let idx = encode(&cur, l);
            exp.push(idx);
            log[idx as usize] = k;
            times_x(&mut cur, &modulus, l);
        }
        Ok(Self {
            char_: l,
            degree: m,
            order: q,
            exp,
            log,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.char_
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The primitive element `X`.
    pub fn primitive(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.order
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.digitwise(a, b, |x, y| (x + y) % self.char_)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.digitwise(a, b, |x, y| (x + self.char_ - y) % self.char_)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(0, a)
    }

    fn digitwise(&self, mut a: Elem, mut b: Elem, f: impl Fn(u32, u32) -> u32) -> Elem {
        let l = self.char_;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.degree {
            out += f(a % l, b % l) * scale;
            a /= l;
            b /= l;
            scale *= l;
        }
        out
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n as u64;
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let n = self.order - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }
}

fn monic(low: u32, l: u32, m: u32) -> Vec<u32> {
    // coefficients of X^0..X^{m-1}; X^m is implicit
    let mut f = Vec::with_capacity(m as usize);
    let mut v = low;
    for _ in 0..m {
        f.push(v % l);
        v /= l;
    }
    f
}

fn times_x(cur: &mut [u32], f: &[u32], l: u32) {
    let top = *cur.last().unwrap();
    for i in (1..cur.len()).rev() {
        cur[i] = cur[i - 1];
    }
    cur[0] = 0;
    // X^m = -Σ f_i X^i
    for (c, &fi) in cur.iter_mut().zip(f) {
        *c = (*c + (l - fi) * top) % l;
    }
}

fn encode(cur: &[u32], l: u32) -> u32 {
    cur.iter().rev().fold(0, |acc, &c| acc * l + c)
}

fn x_is_primitive(f: &[u32], l: u32, q: u32) -> bool {
    if f[0] == 0 {
        return false;
    }
    let mut cur = vec![0u32; f.len()];
    cur[0] = 1;
    for k in 1..q {
        times_x(&mut cur, f, l);
        if encode(&cur, l) == 1 {
            return k == q - 1;
        }
    }
    false
}

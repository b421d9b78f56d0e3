//! Univariate polynomials over `Q` or `F_p`, exact factorization into monic
//! irreducibles, and rational functions in one variable `t`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GvfError;
use crate::rational::{big, int, Rat};

/// Coefficient field of `k(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    Rational,
    Prime(u64),
}

impl BaseField {
    /// `F_p` for a prime `p <= 97`.
    pub fn prime(p: u64) -> Result<Self, GvfError> {
        if !(2..=97).contains(&p) || (2..p).any(|d| d * d <= p && p.is_multiple_of(d)) {
            return Err(GvfError::BadField(format!("F_{p}")));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn parse(s: &str) -> Result<Self, GvfError> {
        match s.trim() {
            "Q" | "q" => Ok(BaseField::Rational),
            other => {
                let p = other
                    .strip_prefix('F')
                    .or_else(|| other.strip_prefix("F_"))
                    .map(|x| x.trim_start_matches('_'))
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| GvfError::BadField(other.into()))?;
                Self::prime(p)
            }
        }
    }

    /// Canonical representative of `x` in this field.
    pub fn reduce(&self, x: &Rat) -> Result<Rat, GvfError> {
        match self {
            BaseField::Rational => Ok(x.clone()),
            BaseField::Prime(p) => {
                let p = BigInt::from(*p);
                let d = x.denom().mod_floor(&p);
                if d.is_zero() {
                    return Err(GvfError::BadField(format!("{x} is not defined modulo {p}")));
                }
                let inv = d.modpow(&(&p - 2), &p);
                Ok(big(&(x.numer() * inv).mod_floor(&p)))
            }
        }
    }

    fn red(&self, x: Rat) -> Rat {
        self.reduce(&x).expect("well-defined element")
    }

    fn inv(&self, x: &Rat) -> Rat {
        assert!(!x.is_zero(), "division by zero");
        match self {
            BaseField::Rational => x.recip(),
            BaseField::Prime(_) => self.red(x.recip()),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Polynomial in `t`, coefficients low degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: BaseField,
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(field: BaseField, coeffs: Vec<Rat>) -> Result<Self, GvfError> {
        let c = coeffs
            .iter()
            .map(|x| field.reduce(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::trimmed(field, c))
    }

    pub fn from_ints(field: BaseField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&x| int(x)).collect())
            .expect("integers reduce in every field")
    }

    fn trimmed(field: BaseField, mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn zero(field: BaseField) -> Self {
        Poly {
            field,
            c: Vec::new(),
        }
    }

    pub fn constant(field: BaseField, x: Rat) -> Self {
        Self::trimmed(field, vec![field.red(x)])
    }

    pub fn one(field: BaseField) -> Self {
        Self::constant(field, Rat::one())
    }

    /// The variable `t`.
    pub fn t(field: BaseField) -> Self {
        Poly {
            field,
            c: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here and is checked separately.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.field.inv(&self.lead()))
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        let f = self.field;
        Self::trimmed(f, self.c.iter().map(|x| f.red(x * s)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let z = Rat::zero();
        Self::trimmed(
            f,
            (0..n)
                .map(|i| f.red(self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let f = self.field;
        Self::trimmed(f, c.into_iter().map(|x| f.red(x)).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.field;
        let mut r = self.c.clone();
        let dl = f.inv(&d.lead());
        let dn = d.degree();
        if r.len() < d.c.len() {
            return (Poly::zero(f), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let coef = f.red(&r[k + dn] * &dl);
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = f.red(&r[k + j] - &coef * dj);
            }
            q[k] = coef;
        }
        r.truncate(dn);
        (Self::trimmed(f, q), Self::trimmed(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Self::trimmed(
            f,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| f.red(x * int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let f = self.field;
        self.c
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, a| f.red(acc * x + a))
    }

    /// Monic irreducible factors with multiplicity, and the leading coefficient.
    pub fn factor(&self) -> Result<(Rat, Vec<(Poly, u32)>), GvfError> {
        if self.is_zero() {
            return Err(GvfError::ZeroFunction);
        }
        let unit = self.lead();
        let mut out = Vec::new();
        for (part, mult) in squarefree(&self.monic()) {
            let pieces = match self.field {
                BaseField::Rational => split_rational(&part),
                BaseField::Prime(p) => berlekamp(&part, p),
            };
            out.extend(pieces.into_iter().map(|g| (g, mult)));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((unit, out))
    }

    /// Irreducibility test via factorization.
    pub fn is_irreducible(&self) -> bool {
        !self.is_constant()
            && matches!(self.factor(), Ok((_, ref fs)) if fs.len() == 1 && fs[0].1 == 1)
    }

    /// Multiplicity of the monic irreducible `p` in `self`.
    pub fn order_at(&self, p: &Poly) -> u32 {
        let mut k = 0;
        let mut g = self.clone();
        loop {
            let (q, r) = g.divrem(p);
            if !r.is_zero() || g.is_zero() {
                return k;
            }
            g = q;
            k += 1;
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.c.len().cmp(&other.c.len()))
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = if mag.is_one() && i > 0 {
                String::new()
            } else if mag.is_integer() || i == 0 {
                format!("{mag}")
            } else {
                format!("({mag})")
            };
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            let sep = if !coef.is_empty() && !mono.is_empty() {
                "*"
            } else {
                ""
            };
            write!(f, "{coef}{sep}{mono}")?;
        }
        Ok(())
    }
}

/// Square-free decomposition of a monic polynomial: coprime square-free
/// parts with their multiplicities.
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field;
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_constant() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if let BaseField::Prime(p) = field {
        if !c.is_constant() {
            // c is a p-th power; its p-th root has the same coefficients.
            let p = p as usize;
            let root = Poly::trimmed(field, c.c.iter().step_by(p).cloned().collect());
            for (g, k) in squarefree(&root) {
                out.push((g, k * p as u32));
            }
        }
    }
    out
}

fn to_u64(x: &Rat) -> u64 {
    x.to_integer().to_u64().expect("reduced residue")
}

/// Kernel of a matrix over `F_p` (rows of length `n`).
fn kernel_mod_p(m: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let inv = |x: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let iv = inv(a[row][col]);
        for x in a[row].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..a.len() {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for k in 0..n {
                    a[r][k] = (a[r][k] + p * p - f * a[row][k] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][free]) % p;
            }
            v
        })
        .collect()
}

/// Berlekamp splitting of a monic square-free polynomial over `F_p`.
fn berlekamp(f: &Poly, p: u64) -> Vec<Poly> {
    let field = f.field;
    let n = f.degree();
    if n <= 1 {
        return vec![f.clone()];
    }
    // Row i: coefficients of t^{ip} mod f.
    let xp = pow_mod(&Poly::t(field), p, f);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = Poly::one(field);
    for _ in 0..n {
        let mut r: Vec<u64> = cur.c.iter().map(to_u64).collect();
        r.resize(n, 0);
        rows.push(r);
        cur = cur.mul(&xp).rem(f);
    }
    // (Q^T - I) v = 0.
    let m: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| (rows[i][j] + p - (i == j) as u64) % p)
                .collect()
        })
        .collect();
    let ker = kernel_mod_p(&m, n, p);
    let k = ker.len();
    let mut factors = vec![f.clone()];
    for v in &ker {
        if factors.len() == k {
            break;
        }
        let vp = Poly::trimmed(field, v.iter().map(|&x| int(x as i64)).collect());
        if vp.is_constant() {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.degree() <= 1 {
                next.push(g);
                continue;
            }
            let mut rest = g;
            for s in 0..p {
                if rest.degree() <= 1 {
                    break;
                }
                let h = rest.gcd(&vp.sub(&Poly::constant(field, int(s as i64))));
                if !h.is_constant() && h.degree() < rest.degree() {
                    rest = rest.div_exact(&h);
                    next.push(h);
                }
            }
            next.push(rest);
        }
        factors = next;
    }
    factors.into_iter().map(|g| g.monic()).collect()
}

fn pow_mod(b: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut r = Poly::one(b.field);
    let mut base = b.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r.mul(&base).rem(m);
        }
        base = base.mul(&base).rem(m);
        e >>= 1;
    }
    r
}

/// Primitive integer multiple of a rational polynomial.
fn integer_primitive(f: &Poly) -> Vec<BigInt> {
    crate::rational::primitive(&f.c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
    let field = BaseField::Rational;
    let mut acc = Poly::zero(field);
    for i in 0..xs.len() {
        let mut term = Poly::constant(field, ys[i].clone());
        for j in 0..xs.len() {
            if i != j {
                let lin = Poly::new(field, vec![-xs[j].clone(), Rat::one()]).unwrap();
                term = term.mul(&lin).scale(&(&xs[i] - &xs[j]).recip());
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Kronecker's method: a factor of degree `d` of the primitive integer
/// polynomial `f`, if one exists.
fn kronecker_factor(f: &Poly, d: usize) -> Option<Poly> {
    let mut cands: Vec<(Rat, BigInt)> = Vec::new();
    for x in (-24i64..=24).map(int) {
        let v = f.eval(&x);
        if v.is_zero() {
            return Some(Poly::new(BaseField::Rational, vec![-x, Rat::one()]).unwrap());
        }
        cands.push((x, v.to_integer()));
    }
    cands.sort_by_key(|(_, v)| divisors(v).len());
    let pts: Vec<(Rat, BigInt)> = cands.into_iter().take(d + 1).collect();
    let xs: Vec<Rat> = pts.iter().map(|(x, _)| x.clone()).collect();
    let divs: Vec<Vec<BigInt>> = pts.iter().map(|(_, v)| divisors(v)).collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        // Sign of the first value fixed positive; the rest range over ±.
        for signs in 0u64..(1 << d) {
            let ys: Vec<Rat> = (0..=d)
                .map(|i| {
                    let v = big(&divs[i][idx[i]]);
                    if i > 0 && signs >> (i - 1) & 1 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            let g = interpolate(&xs, &ys);
            if g.degree() == d && g.c.iter().all(|c| c.is_integer()) && f.rem(&g).is_zero() {
                return Some(g.monic());
            }
        }
        let mut k = 0;
        loop {
            if k > d {
                return None;
            }
            idx[k] += 1;
            if idx[k] < divs[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Monic irreducible factors of a monic square-free polynomial over `Q`.
fn split_rational(f: &Poly) -> Vec<Poly> {
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    let prim = Poly::trimmed(
        BaseField::Rational,
        integer_primitive(f).iter().map(big).collect(),
    );
    for d in 1..=f.degree() / 2 {
        if let Some(g) = kronecker_factor(&prim, d) {
            let h = f.div_exact(&g);
            let mut out = split_rational(&g);
            out.extend(split_rational(&h.monic()));
            return out;
        }
    }
    vec![f.clone()]
}

/// Nonzero element `num / den` of `k(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, GvfError> {
        if num.is_zero() {
            return Err(GvfError::ZeroFunction);
        }
        if den.is_zero() || num.field != den.field {
            return Err(GvfError::Parse("bad denominator".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_exact(&g), den.div_exact(&g));
        let l = num.field.inv(&den.lead());
        Ok(RationalFunction {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn poly(p: Poly) -> Result<Self, GvfError> {
        let one = Poly::one(p.field);
        Self::new(p, one)
    }

    pub fn field(&self) -> BaseField {
        self.num.field
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("product of nonzero functions")
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone()).expect("nonzero")
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Parses expressions in `t` with `+ - * / ^`, parentheses and rational
    /// constants, e.g. `(t-1)/t` or `t^2+1`.
    pub fn parse(field: BaseField, s: &str) -> Result<Self, GvfError> {
        let mut p = Parser {
            s: s.as_bytes(),
            i: 0,
            field,
        };
        let (n, d) = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(GvfError::Parse(format!("trailing input in {s:?}")));
        }
        Self::new(n, d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lead().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    field: BaseField,
}

type Frac = (Poly, Poly);

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, what: &str) -> GvfError {
        GvfError::Parse(format!("{what} at byte {}", self.i))
    }

    fn expr(&mut self) -> Result<Frac, GvfError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let (n, d) = self.term()?;
            let n = if c == b'-' { n.neg() } else { n };
            acc = (acc.0.mul(&d).add(&n.mul(&acc.1)), acc.1.mul(&d));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac, GvfError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    let (n, d) = self.unary()?;
                    acc = (acc.0.mul(&n), acc.1.mul(&d));
                }
                Some(b'/') => {
                    self.i += 1;
                    let (n, d) = self.unary()?;
                    if n.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = (acc.0.mul(&d), acc.1.mul(&n));
                }
                Some(b't' | b'(') => {
                    let (n, d) = self.unary()?;
                    acc = (acc.0.mul(&n), acc.1.mul(&d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, GvfError> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            let (n, d) = self.unary()?;
            return Ok((n.neg(), d));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok((base.0.pow(e), base.1.pow(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac, GvfError> {
        let f = self.field;
        match self.peek() {
            Some(b't') => {
                self.i += 1;
                Ok((Poly::t(f), Poly::one(f)))
            }
            Some(b'(') => {
                self.i += 1;
                let r = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(r)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.i])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok((Poly::new(f, vec![big(&n)])?, Poly::one(f)))
            }
            _ => Err(self.err("expected t, a number or '('")),
        }
    }
}

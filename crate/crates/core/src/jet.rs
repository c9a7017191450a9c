//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] stores the Taylor coefficients of a smooth function of `nvars`
//! chart coordinates up to total degree `order`, around a fixed point.
//! Arithmetic and the elementary functions propagate those coefficients
//! exactly (up to floating point rounding), so every partial derivative up to
//! `order` is available without finite differences.
//!
//! Monomials are stored in graded order: all degree-0 terms, then degree 1,
//! and so on. The ordering within a degree does not depend on the maximum
//! order, so the layout of an order-`k` space is a prefix of every
//! higher-order space over the same variables. Truncation is a slice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::JetError;

/// Monomial layout and multiplication tables for a given variable count and order.
pub struct JetSpace {
    nvars: usize,
    order: usize,
    monomials: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    degree: Vec<usize>,
    mul_table: Vec<(u32, u32, u32)>,
    lower: Option<Arc<JetSpace>>,
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetSpace")
            .field("nvars", &self.nvars)
            .field("order", &self.order)
            .finish()
    }
}

fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Vec<u8>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut tail in monomials_of_degree(nvars - 1, degree - first) {
            let mut m = Vec::with_capacity(nvars);
            m.push(first as u8);
            m.append(&mut tail);
            out.push(m);
        }
    }
    out
}

impl JetSpace {
    pub fn new(nvars: usize, order: usize) -> Arc<Self> {
        let lower = if order > 0 {
            Some(Self::new(nvars, order - 1))
        } else {
            None
        };
        let mut monomials = Vec::new();
        let mut degree = Vec::new();
        for d in 0..=order {
            for m in monomials_of_degree(nvars, d) {
                monomials.push(m);
                degree.push(d);
            }
        }
        let index: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut mul_table = Vec::new();
        for (i, mi) in monomials.iter().enumerate() {
            for (j, mj) in monomials.iter().enumerate() {
                if degree[i] + degree[j] > order {
                    continue;
                }
                let sum: Vec<u8> = mi.iter().zip(mj).map(|(a, b)| a + b).collect();
                mul_table.push((i as u32, j as u32, index[&sum] as u32));
            }
        }
        Arc::new(Self {
            nvars,
            order,
            monomials,
            index,
            degree,
            mul_table,
            lower,
        })
    }

    /// Shared space for `(nvars, order)`; tables are built once per process.
    pub fn cached(nvars: usize, order: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((nvars, order))
            .or_insert_with(|| Self::new(nvars, order))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The space of the same variables with order reduced by one.
    pub fn lower(&self) -> Option<&Arc<JetSpace>> {
        self.lower.as_ref()
    }

    /// Space with the same variables and the requested (smaller or equal) order.
    pub fn with_order(self: &Arc<Self>, order: usize) -> Arc<JetSpace> {
        assert!(order <= self.order, "cannot raise jet order");
        let mut s = self.clone();
        while s.order > order {
            s = s.lower.clone().expect("lower space exists above order 0");
        }
        s
    }

    pub fn constant(self: &Arc<Self>, value: f64) -> Jet {
        let mut coeffs = vec![0.0; self.len()];
        coeffs[0] = value;
        Jet {
            space: self.clone(),
            coeffs,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Jet {
        self.constant(0.0)
    }

    /// The coordinate function `x_var` expanded at `value`.
    pub fn variable(self: &Arc<Self>, var: usize, value: f64) -> Jet {
        assert!(var < self.nvars, "variable index out of range");
        let mut j = self.constant(value);
        if self.order > 0 {
            let mut m = vec![0u8; self.nvars];
            m[var] = 1;
            j.coeffs[self.index[&m]] = 1.0;
        }
        j
    }

    fn same_variables(&self, other: &JetSpace) -> bool {
        self.nvars == other.nvars
    }
}

/// A function germ truncated at a fixed total degree.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.space.nvars)
            .field("order", &self.space.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Jet {
    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficients in the space's monomial order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// True when every non-constant coefficient is zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| *c == 0.0)
    }

    /// Mixed partial derivative; `vars` lists the differentiation variables
    /// with repetition, e.g. `[0, 0, 2]` for ∂₀∂₀∂₂.
    pub fn partial(&self, vars: &[usize]) -> f64 {
        if vars.len() > self.order() {
            panic!(
                "partial of degree {} requested from an order-{} jet",
                vars.len(),
                self.order()
            );
        }
        let mut m = vec![0u8; self.nvars()];
        for &v in vars {
            m[v] += 1;
        }
        let fact: f64 = m.iter().map(|&e| factorial(e as usize)).product();
        fact * self.coeffs[self.space.index[&m]]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Drop every term above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let space = self.space.with_order(order);
        let coeffs = self.coeffs[..space.len()].to_vec();
        Jet { space, coeffs }
    }

    /// Exact partial derivative along `var`, one order lower.
    pub fn derivative(&self, var: usize) -> Jet {
        let lower = self
            .space
            .lower
            .clone()
            .expect("cannot differentiate an order-0 jet");
        let mut coeffs = vec![0.0; lower.len()];
        for (k, m) in self.space.monomials.iter().enumerate() {
            if m[var] == 0 {
                continue;
            }
            let mut reduced = m.clone();
            reduced[var] -= 1;
            coeffs[self.space.index[&reduced]] += m[var] as f64 * self.coeffs[k];
        }
        Jet {
            space: lower,
            coeffs,
        }
    }

    /// Re-express this jet over a larger set of variables; `var_map[i]` is the
    /// target index of source variable `i`. The target order may be smaller.
    pub fn embed(&self, target: &Arc<JetSpace>, var_map: &[usize]) -> Jet {
        assert_eq!(var_map.len(), self.nvars(), "variable map length");
        let mut out = target.zero();
        for (k, m) in self.space.monomials.iter().enumerate() {
            if self.space.degree[k] > target.order {
                break;
            }
            let mut tm = vec![0u8; target.nvars];
            for (src, &e) in m.iter().enumerate() {
                tm[var_map[src]] += e;
            }
            out.coeffs[target.index[&tm]] += self.coeffs[k];
        }
        out
    }

    fn aligned<'a>(
        a: &'a Jet,
        b: &'a Jet,
    ) -> (std::borrow::Cow<'a, Jet>, std::borrow::Cow<'a, Jet>) {
        use std::borrow::Cow;
        assert!(
            a.space.same_variables(&b.space),
            "jets over different variable sets"
        );
        match a.order().cmp(&b.order()) {
            std::cmp::Ordering::Equal => (Cow::Borrowed(a), Cow::Borrowed(b)),
            std::cmp::Ordering::Less => (Cow::Borrowed(a), Cow::Owned(b.truncate(a.order()))),
            std::cmp::Ordering::Greater => (Cow::Owned(a.truncate(b.order())), Cow::Borrowed(b)),
        }
    }

    fn mul_jet(&self, other: &Jet) -> Jet {
        let (a, b) = Self::aligned(self, other);
        let mut coeffs = vec![0.0; a.space.len()];
        for &(i, j, k) in &a.space.mul_table {
            coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
        }
        Jet {
            space: a.space.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `f(self)` given `derivs[k] = f⁽ᵏ⁾(value)` for `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.order();
        debug_assert!(derivs.len() > order);
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut out = self.space.constant(derivs[0]);
        let mut power = self.space.constant(1.0);
        let mut kfact = 1.0;
        for (k, d) in derivs.iter().enumerate().take(order + 1).skip(1) {
            power = power.mul_jet(&h);
            kfact *= k as f64;
            let c = d / kfact;
            if c != 0.0 {
                for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                    *o += c * p;
                }
            }
        }
        out.coeffs[0] = derivs[0];
        out
    }

    fn checked(self, func: &'static str, arg: f64) -> Result<Jet, JetError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(JetError::Domain { func, value: arg })
        }
    }

    pub fn exp(&self) -> Result<Jet, JetError> {
        let e = self.value().exp();
        self.compose(&vec![e; self.order() + 1])
            .checked("exp", self.value())
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain {
                func: "log",
                value: a,
            });
        }
        let mut d = vec![a.ln()];
        let mut c = 1.0;
        for k in 1..=self.order() {
            d.push(c / a.powi(k as i32));
            c *= -(k as f64);
        }
        Ok(self.compose(&d))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [s, c, -s, -c];
        let d: Vec<f64> = (0..=self.order()).map(|k| cycle[k % 4]).collect();
        self.compose(&d)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [c, -s, -c, s];
        let d: Vec<f64> = (0..=self.order()).map(|k| cycle[k % 4]).collect();
        self.compose(&d)
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let d: Vec<f64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { s } else { c })
            .collect();
        self.compose(&d)
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let d: Vec<f64> = (0..=self.order())
            .map(|k| if k % 2 == 0 { c } else { s })
            .collect();
        self.compose(&d)
    }

    /// Derivatives of tan/tanh through the polynomial recursion
    /// P₀ = T, Pₖ₊₁ = Pₖ'(T)·(1 + σT²).
    fn tangent_like(&self, value: f64, sigma: f64) -> Jet {
        let mut poly = vec![0.0, 1.0];
        let mut d = vec![value];
        for _ in 0..self.order() {
            let dp: Vec<f64> = (1..poly.len()).map(|i| i as f64 * poly[i]).collect();
            let mut next = vec![0.0; dp.len() + 2];
            for (i, c) in dp.iter().enumerate() {
                next[i] += c;
                next[i + 2] += sigma * c;
            }
            poly = next;
            d.push(poly.iter().rev().fold(0.0, |acc, c| acc * value + c));
        }
        self.compose(&d)
    }

    pub fn tan(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a.cos() == 0.0 {
            return Err(JetError::Domain {
                func: "tan",
                value: a,
            });
        }
        self.tangent_like(a.tan(), 1.0).checked("tan", a)
    }

    pub fn tanh(&self) -> Jet {
        self.tangent_like(self.value().tanh(), -1.0)
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a < 0.0 || (a == 0.0 && self.order() > 0) {
            return Err(JetError::Domain {
                func: "sqrt",
                value: a,
            });
        }
        let mut j = self.powf_unchecked(0.5);
        j.coeffs[0] = a.sqrt();
        Ok(j)
    }

    fn powf_unchecked(&self, p: f64) -> Jet {
        let a = self.value();
        let mut d = Vec::with_capacity(self.order() + 1);
        let mut falling = 1.0;
        for k in 0..=self.order() {
            d.push(falling * a.powf(p - k as f64));
            falling *= p - k as f64;
        }
        self.compose(&d)
    }

    /// Real power with a constant exponent; the base must be positive.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: a,
            });
        }
        Ok(self.powf_unchecked(p))
    }

    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let a = self.value();
        if n < 0 && a == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut d = Vec::with_capacity(self.order() + 1);
        let mut falling = 1.0;
        for k in 0..=self.order() {
            let e = n - k as i32;
            d.push(if falling == 0.0 {
                0.0
            } else {
                falling * a.powi(e)
            });
            falling *= e as f64;
        }
        Ok(self.compose(&d))
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        self.powi(-1)
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet, JetError> {
        if other.value() == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut q = self.mul_jet(&other.recip()?);
        q.coeffs[0] = self.value() / other.value();
        Ok(q)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| {
    let (a, b) = Jet::aligned(a, b);
    Jet {
        space: a.space.clone(),
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
    }
});

jet_binop!(Sub, sub, |a, b| {
    let (a, b) = Jet::aligned(a, b);
    Jet {
        space: a.space.clone(),
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
    }
});

jet_binop!(Mul, mul, |a, b| a.mul_jet(b));

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut j = self.clone();
        j.coeffs[0] += rhs;
        j
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        if self.order() <= rhs.order() {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        if self.order() <= rhs.order() {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

//! Finite class-2 p-groups presented by (V, S, cocycle) data.
//!
//! A group here is one of three kinds:
//!
//! - `odd-special`: p odd, elements (v, s) with v in GF(p)^n, s in GF(p)^m,
//!   commutators given by an alternating bilinear form B and p-th powers by
//!   a linear map T;
//! - `two-special`: p = 2, squares given by a quadratic map q and
//!   commutators by its polar form;
//! - `abelian`: a direct product of cyclic groups of prime-power order.
//!
//! Construction validates the presentation data, fixes the multiplication
//! cocycle, and caches the center, derived subgroup, Frattini subgroup and
//! exponent invariants. Groups are immutable after construction and safe
//! to share across threads; element operations are pure.

use serde::{Deserialize, Serialize};

use crate::fp::{
    inv_mod, is_prime, mul_mod, neg_mod, sub_mod, BilinearForm, LinearMap, QuadraticMap,
};
use crate::{Error, Result};

/// Hard cap on coordinates per digit vector.
pub const MAX_DIGITS: usize = 16;

/// Hard cap on group order; enumeration is quadratic in it.
pub const MAX_ORDER: u64 = 1 << 20;

/// Fixed-capacity digit vector. Unused slots stay zero so that derived
/// equality and hashing see only the live digits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Digits {
    len: u8,
    buf: [u32; MAX_DIGITS],
}

impl Digits {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_DIGITS);
        Digits {
            len: len as u8,
            buf: [0; MAX_DIGITS],
        }
    }

    pub fn from_slice(digits: &[u32]) -> Self {
        let mut d = Digits::zeros(digits.len());
        d.buf[..digits.len()].copy_from_slice(digits);
        d
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.buf[..self.len as usize]
    }

    #[inline]
    fn set(&mut self, i: usize, d: u32) {
        debug_assert!(i < self.len());
        self.buf[i] = d;
    }
}

impl std::fmt::Debug for Digits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

/// A group element: a v-part over V and an s-part over S. For the abelian
/// kind the digits live in the v-part, one per cyclic factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    pub(crate) v: Digits,
    pub(crate) s: Digits,
}

impl Element {
    pub fn v(&self) -> &[u32] {
        self.v.as_slice()
    }

    pub fn s(&self) -> &[u32] {
        self.s.as_slice()
    }
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}|{:?})", self.v, self.s)
    }
}

/// The presentation data behind a group.
#[derive(Debug, Clone)]
pub enum GroupKind {
    OddSpecial { b: BilinearForm, t: LinearMap },
    TwoSpecial { q: QuadraticMap },
    Abelian { orders: Vec<u64> },
}

/// Validated group presentation.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    p: u32,
    n: usize,
    m: usize,
    kind: GroupKind,
}

fn is_prime_power(mut x: u64) -> Option<u64> {
    if x < 2 {
        return None;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            while x.is_multiple_of(d) {
                x /= d;
            }
            return if x == 1 { Some(d) } else { None };
        }
        d += 1;
    }
    Some(x)
}

impl GroupSpec {
    /// Odd-p presentation from an alternating nondegenerate B whose image
    /// spans S, and a linear power map T.
    pub fn odd_special(p: u32, b: BilinearForm, t: LinearMap) -> Result<Self> {
        if !is_prime(p as u64) || p == 2 {
            return Err(Error::InvalidSpec(format!("{p} is not an odd prime")));
        }
        if b.modulus() != p || t.modulus() != p {
            return Err(Error::InvalidSpec("form moduli disagree with p".into()));
        }
        let (n, m) = (b.dim_v(), b.dim_s());
        if t.dim_v() != n || t.dim_s() != m {
            return Err(Error::InvalidSpec(
                "power map dimensions disagree with the bilinear form".into(),
            ));
        }
        Self::check_dims(n, m)?;
        if !b.is_alternating() {
            return Err(Error::InvalidSpec("bilinear form is not alternating".into()));
        }
        if !b.is_nondegenerate() {
            return Err(Error::InvalidSpec("bilinear form is degenerate".into()));
        }
        if !b.image_spans_s() {
            return Err(Error::InvalidSpec("form image does not span S".into()));
        }
        Self::check_order(p, n, m)?;
        Ok(GroupSpec {
            p,
            n,
            m,
            kind: GroupKind::OddSpecial { b, t },
        })
    }

    /// p = 2 presentation from a quadratic map with nondegenerate polar
    /// form whose image spans S.
    pub fn two_special(q: QuadraticMap) -> Result<Self> {
        let (n, m) = (q.dim_v(), q.dim_s());
        Self::check_dims(n, m)?;
        let b = q.polar_form();
        if !b.is_nondegenerate() {
            return Err(Error::InvalidSpec("polar form is degenerate".into()));
        }
        if !b.image_spans_s() {
            return Err(Error::InvalidSpec("polar form image does not span S".into()));
        }
        Self::check_order(2, n, m)?;
        Ok(GroupSpec {
            p: 2,
            n,
            m,
            kind: GroupKind::TwoSpecial { q },
        })
    }

    /// Direct product of cyclic groups of the given prime-power orders.
    pub fn abelian(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidSpec("empty cyclic order list".into()));
        }
        if orders.len() > MAX_DIGITS {
            return Err(Error::InvalidSpec(format!(
                "too many cyclic factors ({} > {MAX_DIGITS})",
                orders.len()
            )));
        }
        let mut order = 1u64;
        for &q in &orders {
            if is_prime_power(q).is_none() {
                return Err(Error::InvalidSpec(format!(
                    "cyclic order {q} is not a prime power"
                )));
            }
            order = order.saturating_mul(q);
        }
        if order > MAX_ORDER {
            return Err(Error::InvalidSpec(format!(
                "group order {order} exceeds the build cap {MAX_ORDER}"
            )));
        }
        Ok(GroupSpec {
            p: 0,
            n: orders.len(),
            m: 0,
            kind: GroupKind::Abelian { orders },
        })
    }

    fn check_dims(n: usize, m: usize) -> Result<()> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidSpec("V and S must be nontrivial".into()));
        }
        if n > MAX_DIGITS || m > MAX_DIGITS {
            return Err(Error::InvalidSpec(format!(
                "dimensions exceed the digit cap {MAX_DIGITS}"
            )));
        }
        Ok(())
    }

    fn check_order(p: u32, n: usize, m: usize) -> Result<()> {
        let bits = ((n + m) as f64) * (p as f64).log2();
        if bits > (MAX_ORDER as f64).log2() {
            return Err(Error::InvalidSpec(format!(
                "group order p^{} exceeds the build cap {MAX_ORDER}",
                n + m
            )));
        }
        Ok(())
    }

    /// The prime, for the two special kinds; 0 marks the abelian kind.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim_v(&self) -> usize {
        self.n
    }

    pub fn dim_s(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            GroupKind::OddSpecial { .. } => "odd-special",
            GroupKind::TwoSpecial { .. } => "two-special",
            GroupKind::Abelian { .. } => "abelian",
        }
    }
}

/// JSON document for a group presentation; unused fields are omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<Vec<u64>>>>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<Vec<u64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u64>>,
}

impl GroupSpec {
    pub fn from_doc(doc: &SpecDoc) -> Result<Self> {
        match doc.kind.as_str() {
            "odd-special" => {
                let p = doc
                    .p
                    .ok_or_else(|| Error::InvalidSpec("odd-special needs p".into()))?;
                let n = doc
                    .n
                    .ok_or_else(|| Error::InvalidSpec("odd-special needs n".into()))?;
                let b = doc
                    .b
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("odd-special needs B".into()))?;
                let m = doc.m.unwrap_or(b.len());
                if m != b.len() {
                    return Err(Error::InvalidSpec("m disagrees with B".into()));
                }
                let t = doc
                    .t
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("odd-special needs T".into()))?;
                GroupSpec::odd_special(
                    p,
                    BilinearForm::new(b, n, p)?,
                    LinearMap::new(t, n, p)?,
                )
            }
            "two-special" => {
                if let Some(p) = doc.p {
                    if p != 2 {
                        return Err(Error::InvalidSpec("two-special needs p = 2".into()));
                    }
                }
                let n = doc
                    .n
                    .ok_or_else(|| Error::InvalidSpec("two-special needs n".into()))?;
                let q = doc
                    .q
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("two-special needs q".into()))?;
                if let Some(m) = doc.m {
                    if m != q.len() {
                        return Err(Error::InvalidSpec("m disagrees with q".into()));
                    }
                }
                GroupSpec::two_special(QuadraticMap::new(q, n)?)
            }
            "abelian" => {
                let orders = doc
                    .orders
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("abelian needs orders".into()))?;
                GroupSpec::abelian(orders)
            }
            other => Err(Error::InvalidSpec(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_doc(&self) -> SpecDoc {
        match &self.kind {
            GroupKind::OddSpecial { b, t } => SpecDoc {
                p: Some(self.p),
                kind: "odd-special".into(),
                n: Some(self.n),
                m: Some(self.m),
                b: Some(
                    (0..self.m)
                        .map(|k| {
                            (0..self.n)
                                .map(|i| {
                                    (0..self.n).map(|j| b.entry(k, i, j) as u64).collect()
                                })
                                .collect()
                        })
                        .collect(),
                ),
                t: Some(
                    (0..self.m)
                        .map(|k| (0..self.n).map(|j| t.entry(k, j) as u64).collect())
                        .collect(),
                ),
                q: None,
                orders: None,
            },
            GroupKind::TwoSpecial { q } => SpecDoc {
                p: Some(2),
                kind: "two-special".into(),
                n: Some(self.n),
                m: Some(self.m),
                b: None,
                t: None,
                q: Some(
                    (0..self.m)
                        .map(|k| {
                            (0..self.n)
                                .map(|i| {
                                    (0..self.n).map(|j| q.coeff(k, i, j) as u64).collect()
                                })
                                .collect()
                        })
                        .collect(),
                ),
                orders: None,
            },
            GroupKind::Abelian { orders } => SpecDoc {
                p: None,
                kind: "abelian".into(),
                n: None,
                m: None,
                b: None,
                t: None,
                q: None,
                orders: Some(orders.clone()),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("spec doc serializes")
    }
}

/// Exponent invariants: e = exp(G), e' = exp(G'), f = exp(G/Z(G)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Exponents {
    pub e: u64,
    pub e_prime: u64,
    pub f: u64,
}

/// A bit-indexed subset of a group, keyed by element rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    capacity: u64,
    bits: Vec<u64>,
}

impl ElementSet {
    pub fn empty(capacity: u64) -> Self {
        let words = capacity.div_ceil(64) as usize;
        ElementSet {
            capacity,
            bits: vec![0; words],
        }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    #[inline]
    pub fn insert(&mut self, rank: u64) {
        debug_assert!(rank < self.capacity);
        self.bits[(rank / 64) as usize] |= 1 << (rank % 64);
    }

    #[inline]
    pub fn contains(&self, rank: u64) -> bool {
        rank < self.capacity && self.bits[(rank / 64) as usize] & (1 << (rank % 64)) != 0
    }

    pub fn len(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.capacity == other.capacity
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.capacity).filter(move |&r| self.contains(r))
    }

    /// Lowercase hex bitmap; byte 0 comes first and its least significant
    /// bit is rank 0.
    pub fn to_hex(&self) -> String {
        let nbytes = self.capacity.div_ceil(8) as usize;
        let mut out = String::with_capacity(nbytes * 2);
        for byte_idx in 0..nbytes {
            let word = self.bits[byte_idx / 8];
            let byte = ((word >> ((byte_idx % 8) * 8)) & 0xff) as u8;
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn from_hex(hex: &str, capacity: u64) -> Result<Self> {
        let nbytes = capacity.div_ceil(8) as usize;
        if hex.len() != nbytes * 2 {
            return Err(Error::InvalidSpec(format!(
                "hex bitmap has {} chars, expected {}",
                hex.len(),
                nbytes * 2
            )));
        }
        let mut set = ElementSet::empty(capacity);
        for byte_idx in 0..nbytes {
            let byte = u8::from_str_radix(&hex[byte_idx * 2..byte_idx * 2 + 2], 16)
                .map_err(|e| Error::InvalidSpec(format!("bad hex bitmap: {e}")))?;
            set.bits[byte_idx / 8] |= (byte as u64) << ((byte_idx % 8) * 8);
        }
        for rank in capacity..(nbytes as u64 * 8) {
            if set.bits[(rank / 64) as usize] & (1 << (rank % 64)) != 0 {
                return Err(Error::InvalidSpec(
                    "hex bitmap has bits beyond the group order".into(),
                ));
            }
        }
        Ok(set)
    }
}

/// A built group: validated presentation plus cached invariants.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    order: u64,
    radix: Vec<u64>, // per-digit radix, v digits then s digits
    // Cocycle data for the special kinds: s-part correction of a product.
    // c(v, w) = sum_k (v^T cocycle_mats[k] w) e_k + sum_j carry_j(v, w) carry_cols[j]
    cocycle_mats: Vec<Vec<u32>>,
    carry_cols: Vec<Vec<u32>>,
    center: ElementSet,
    derived: ElementSet,
    frattini: ElementSet,
    exponents: Exponents,
}

/// Construct and validate a group from its presentation.
///
/// For the special kinds the multiplication law is
/// (v1, s1)(v2, s2) = (v1+v2, s1+s2+c(v1, v2)) and the cocycle c is fixed
/// so that commutators realize B (or the polar form of q) and p-th powers
/// realize T (or q).
pub fn build_group(spec: GroupSpec) -> Result<Group> {
    let (order, radix) = match &spec.kind {
        GroupKind::Abelian { orders } => {
            let order = orders.iter().product::<u64>();
            (order, orders.clone())
        }
        _ => {
            let digits = spec.n + spec.m;
            let order = (spec.p as u64)
                .checked_pow(digits as u32)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| {
                    Error::InvalidSpec(format!("order p^{digits} exceeds the build cap"))
                })?;
            (order, vec![spec.p as u64; digits])
        }
    };

    let (cocycle_mats, carry_cols) = match &spec.kind {
        GroupKind::OddSpecial { b, t } => {
            let p = spec.p;
            let half = inv_mod(2 % p, p);
            let mats = (0..spec.m)
                .map(|k| {
                    let mut mat = vec![0u32; spec.n * spec.n];
                    for i in 0..spec.n {
                        for j in 0..spec.n {
                            mat[i * spec.n + j] = mul_mod(half, b.entry(k, i, j), p);
                        }
                    }
                    mat
                })
                .collect();
            let cols = (0..spec.n)
                .map(|j| (0..spec.m).map(|k| t.entry(k, j)).collect())
                .collect();
            (mats, cols)
        }
        GroupKind::TwoSpecial { q } => {
            // Strict upper triangle of the polar form; the diagonal
            // coefficients ride on the carry term since carry_i = v_i w_i
            // over GF(2).
            let b = q.polar_form();
            let mats = (0..spec.m)
                .map(|k| {
                    let mut mat = vec![0u32; spec.n * spec.n];
                    for i in 0..spec.n {
                        for j in (i + 1)..spec.n {
                            mat[i * spec.n + j] = b.entry(k, i, j);
                        }
                    }
                    mat
                })
                .collect();
            let cols = (0..spec.n)
                .map(|j| (0..spec.m).map(|k| q.coeff(k, j, j)).collect())
                .collect();
            (mats, cols)
        }
        GroupKind::Abelian { .. } => (Vec::new(), Vec::new()),
    };

    let mut group = Group {
        spec,
        order,
        radix,
        cocycle_mats,
        carry_cols,
        center: ElementSet::empty(order),
        derived: ElementSet::empty(order),
        frattini: ElementSet::empty(order),
        exponents: Exponents {
            e: 1,
            e_prime: 1,
            f: 1,
        },
    };

    group.compute_caches()?;
    Ok(group)
}

impl Group {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_abelian_kind(&self) -> bool {
        matches!(self.spec.kind, GroupKind::Abelian { .. })
    }

    fn dims(&self) -> (usize, usize) {
        match self.spec.kind {
            GroupKind::Abelian { .. } => (self.radix.len(), 0),
            _ => (self.spec.n, self.spec.m),
        }
    }

    pub fn identity(&self) -> Element {
        let (n, m) = self.dims();
        Element {
            v: Digits::zeros(n),
            s: Digits::zeros(m),
        }
    }

    /// Build an element from digit slices, validating bounds.
    pub fn element(&self, v: &[u32], s: &[u32]) -> Result<Element> {
        let (n, m) = self.dims();
        if v.len() != n || s.len() != m {
            return Err(Error::GroupMismatch);
        }
        for (i, &d) in v.iter().enumerate() {
            if (d as u64) >= self.radix[i] {
                return Err(Error::GroupMismatch);
            }
        }
        for (j, &d) in s.iter().enumerate() {
            if (d as u64) >= self.radix[n + j] {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(Element {
            v: Digits::from_slice(v),
            s: Digits::from_slice(s),
        })
    }

    #[inline]
    fn check_member(&self, g: &Element) -> Result<()> {
        let (n, m) = self.dims();
        if g.v.len() != n || g.s.len() != m {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// Group product.
    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, a: &Element, b: &Element) -> Element {
        match &self.spec.kind {
            GroupKind::Abelian { .. } => {
                let n = a.v.len();
                let mut v = Digits::zeros(n);
                for i in 0..n {
                    let q = self.radix[i];
                    let sum = a.v.buf[i] as u64 + b.v.buf[i] as u64;
                    v.set(i, if sum >= q { (sum - q) as u32 } else { sum as u32 });
                }
                Element { v, s: a.s }
            }
            _ => self.mul_special(a, b),
        }
    }

    #[inline]
    #[allow(clippy::needless_range_loop)]
    fn mul_special(&self, a: &Element, b: &Element) -> Element {
        let p = self.spec.p;
        let (n, m) = (self.spec.n, self.spec.m);
        let mut v = Digits::zeros(n);
        let mut s_acc = [0u64; MAX_DIGITS];
        for k in 0..m {
            s_acc[k] = a.s.buf[k] as u64 + b.s.buf[k] as u64;
        }
        for i in 0..n {
            let sum = a.v.buf[i] + b.v.buf[i];
            if sum >= p {
                v.set(i, sum - p);
                let col = &self.carry_cols[i];
                for k in 0..m {
                    s_acc[k] += col[k] as u64;
                }
            } else {
                v.set(i, sum);
            }
        }
        // Bilinear cocycle part: component k adds a.v^T M_k b.v.
        for (k, mat) in self.cocycle_mats.iter().enumerate() {
            let mut acc = 0u64;
            for i in 0..n {
                let vi = a.v.buf[i] as u64;
                if vi == 0 {
                    continue;
                }
                let row = &mat[i * n..(i + 1) * n];
                let mut rowacc = 0u64;
                for j in 0..n {
                    rowacc += row[j] as u64 * b.v.buf[j] as u64;
                }
                acc += vi * (rowacc % p as u64);
            }
            s_acc[k] += acc;
        }
        let mut s = Digits::zeros(m);
        for k in 0..m {
            s.set(k, (s_acc[k] % p as u64) as u32);
        }
        Element { v, s }
    }

    /// Group inverse.
    pub fn inv(&self, g: &Element) -> Result<Element> {
        self.check_member(g)?;
        Ok(self.inv_unchecked(g))
    }

    #[inline]
    pub(crate) fn inv_unchecked(&self, g: &Element) -> Element {
        match &self.spec.kind {
            GroupKind::Abelian { .. } => {
                let n = g.v.len();
                let mut v = Digits::zeros(n);
                for i in 0..n {
                    let q = self.radix[i] as u32;
                    let d = g.v.buf[i];
                    v.set(i, if d == 0 { 0 } else { q - d });
                }
                Element { v, s: g.s }
            }
            _ => {
                let p = self.spec.p;
                let (n, m) = (self.spec.n, self.spec.m);
                let mut w = Digits::zeros(n);
                for i in 0..n {
                    w.set(i, neg_mod(g.v.buf[i], p));
                }
                // (v,s)^-1 = (-v, -s - c(v,-v)).
                let neutral_s = Element {
                    v: g.v,
                    s: Digits::zeros(m),
                };
                let probe = self.mul_special(
                    &neutral_s,
                    &Element {
                        v: w,
                        s: Digits::zeros(m),
                    },
                );
                let mut s = Digits::zeros(m);
                for k in 0..m {
                    let c = probe.s.buf[k];
                    s.set(k, sub_mod(neg_mod(g.s.buf[k], p), c, p));
                }
                Element { v: w, s }
            }
        }
    }

    /// Integer power, square-and-multiply; negative exponents go through
    /// the inverse.
    pub fn pow(&self, g: &Element, k: i64) -> Result<Element> {
        self.check_member(g)?;
        Ok(self.pow_unchecked(g, k))
    }

    pub(crate) fn pow_unchecked(&self, g: &Element, k: i64) -> Element {
        let mut base = if k < 0 { self.inv_unchecked(g) } else { *g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Commutator g h g^-1 h^-1.
    pub fn commutator(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check_member(g)?;
        self.check_member(h)?;
        Ok(self.commutator_unchecked(g, h))
    }

    #[inline]
    pub(crate) fn commutator_unchecked(&self, g: &Element, h: &Element) -> Element {
        let gh = self.mul_unchecked(g, h);
        let hg = self.mul_unchecked(h, g);
        self.mul_unchecked(&gh, &self.inv_unchecked(&hg))
    }

    /// Least k >= 1 with g^k = 1.
    pub fn order_of(&self, g: &Element) -> u64 {
        let id = self.identity();
        let mut acc = *g;
        let mut k = 1u64;
        while acc != id {
            acc = self.mul_unchecked(&acc, g);
            k += 1;
        }
        k
    }

    /// Mixed-radix rank; v digits are least significant, first digit first.
    pub fn rank(&self, g: &Element) -> u64 {
        let (n, _) = self.dims();
        let mut r = 0u64;
        for i in (0..self.radix.len()).rev() {
            let d = if i < n {
                g.v.buf[i]
            } else {
                g.s.buf[i - n]
            };
            r = r * self.radix[i] + d as u64;
        }
        r
    }

    pub fn unrank(&self, mut rank: u64) -> Result<Element> {
        if rank >= self.order {
            return Err(Error::RankOutOfRange {
                rank,
                order: self.order,
            });
        }
        let (n, m) = self.dims();
        let mut v = Digits::zeros(n);
        let mut s = Digits::zeros(m);
        for i in 0..self.radix.len() {
            let d = (rank % self.radix[i]) as u32;
            rank /= self.radix[i];
            if i < n {
                v.set(i, d);
            } else {
                s.set(i - n, d);
            }
        }
        Ok(Element { v, s })
    }

    /// Materialize all elements in rank order.
    pub fn elements(&self) -> Vec<Element> {
        (0..self.order)
            .map(|r| self.unrank(r).expect("rank in range"))
            .collect()
    }

    /// A minimal generating sequence: basis lifts of V for the special
    /// kinds, one generator per cyclic factor for the abelian kind.
    pub fn generators(&self) -> Vec<Element> {
        let (n, m) = self.dims();
        (0..n)
            .map(|j| {
                let mut v = Digits::zeros(n);
                v.set(j, 1);
                Element {
                    v,
                    s: Digits::zeros(m),
                }
            })
            .collect()
    }

    /// Subgroup generated by the given elements: breadth-first closure
    /// under right multiplication.
    pub fn closure(&self, gens: &[Element]) -> ElementSet {
        let mut set = ElementSet::empty(self.order);
        let id = self.identity();
        set.insert(self.rank(&id));
        let mut queue = vec![id];
        while let Some(a) = queue.pop() {
            for g in gens {
                let b = self.mul_unchecked(&a, g);
                let r = self.rank(&b);
                if !set.contains(r) {
                    set.insert(r);
                    queue.push(b);
                }
            }
        }
        set
    }

    fn compute_caches(&mut self) -> Result<()> {
        let gens = self.generators();

        // Center: elements commuting with every generator.
        let id = self.identity();
        let mut center = ElementSet::empty(self.order);
        for r in 0..self.order {
            let g = self.unrank(r)?;
            if gens
                .iter()
                .all(|h| self.commutator_unchecked(&g, h) == id)
            {
                center.insert(r);
            }
        }

        // Derived subgroup: closure of generator commutators. Commutators
        // are central here (class <= 2), so this subgroup is normal and
        // equals the full commutator subgroup.
        let mut comm_gens = Vec::new();
        for a in &gens {
            for b in &gens {
                let c = self.commutator_unchecked(a, b);
                if c != id {
                    comm_gens.push(c);
                }
            }
        }
        let derived = self.closure(&comm_gens);

        // Frattini subgroup: for the p-group kinds, generated by p-th
        // powers and commutators; for the abelian kind, the product of
        // the per-factor prime-th power subgroups.
        let mut frat_gens = comm_gens.clone();
        match &self.spec.kind {
            GroupKind::Abelian { orders } => {
                for (i, &q) in orders.iter().enumerate() {
                    let prime = is_prime_power(q).expect("validated prime power");
                    let g = &gens[i];
                    frat_gens.push(self.pow_unchecked(g, prime as i64));
                }
            }
            _ => {
                let p = self.spec.p as i64;
                for g in &gens {
                    frat_gens.push(self.pow_unchecked(g, p));
                }
            }
        }
        let frattini = self.closure(&frat_gens);

        // Exponent invariants.
        let mut e = 1u64;
        let mut f = 1u64;
        for r in 0..self.order {
            let g = self.unrank(r)?;
            let o = self.order_of(&g);
            e = lcm(e, o);
            // Least k with g^k central; k divides o.
            let mut k = 1;
            while k <= o {
                if o.is_multiple_of(k) && center.contains(self.rank(&self.pow_unchecked(&g, k as i64))) {
                    f = lcm(f, k);
                    break;
                }
                k += 1;
            }
        }
        let mut e_prime = 1u64;
        for r in derived.iter() {
            let g = self.unrank(r)?;
            e_prime = lcm(e_prime, self.order_of(&g));
        }

        // Sanity for the special kinds: the construction promises that
        // center, derived and Frattini subgroups coincide.
        if !matches!(self.spec.kind, GroupKind::Abelian { .. })
            && (center != derived || derived != frattini)
        {
            return Err(Error::InvalidSpec(
                "constructed group is not special: Z, G' and Frattini differ".into(),
            ));
        }

        self.center = center;
        self.derived = derived;
        self.frattini = frattini;
        self.exponents = Exponents { e, e_prime, f };
        Ok(())
    }

    pub fn center(&self) -> &ElementSet {
        &self.center
    }

    pub fn derived_subgroup(&self) -> &ElementSet {
        &self.derived
    }

    pub fn frattini(&self) -> &ElementSet {
        &self.frattini
    }

    pub fn exponents(&self) -> Exponents {
        self.exponents
    }

    pub fn is_central(&self, g: &Element) -> bool {
        self.center.contains(self.rank(g))
    }

    /// The conjugacy class of g, by direct sweep.
    pub fn conjugacy_class(&self, g: &Element) -> Result<ElementSet> {
        self.check_member(g)?;
        let mut set = ElementSet::empty(self.order);
        for r in 0..self.order {
            let h = self.unrank(r)?;
            let conj = self.mul_unchecked(
                &self.mul_unchecked(&h, g),
                &self.inv_unchecked(&h),
            );
            set.insert(self.rank(&conj));
        }
        Ok(set)
    }

    /// Z(G) = G' = Frattini and that subgroup has prime exponent.
    pub fn is_special_p_group(&self) -> bool {
        if self.center != self.derived || self.derived != self.frattini {
            return false;
        }
        let mut exp = 1u64;
        for r in self.center.iter() {
            let g = self.unrank(r).expect("rank in range");
            exp = lcm(exp, self.order_of(&g));
        }
        is_prime(exp)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

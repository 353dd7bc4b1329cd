//! Nests of lower rays over an exact dense ordered carrier.
//!
//! The carrier is `ℚ` or `ℚ[√2]`, optionally cut to an open window. A ray
//! nest is `{(−∞,e) ∩ C : e ∈ E}` or `{(−∞,e] ∩ C : e ∈ E}` for an endpoint
//! set `E` lying strictly inside the window. Endpoints may lie outside the
//! carrier field, which models real endpoints over a rational carrier.
//!
//! Suprema are taken in the carrier order. Because every endpoint is
//! interior and the carrier is dense, the sup of `(−∞,e)` and of `(−∞,e]`
//! is `e` when `e` is a carrier point and does not exist otherwise. That
//! yields the decision table:
//!
//! | condition | rule |
//! |-----------|------|
//! | C1 | every endpoint is a carrier point |
//! | C2 | C1 and the rays are open, so `e ∉ (−∞,e)` |
//! | C3 | C2 and every carrier point in the window is an endpoint |
//!
//! Separation: `a ⊲ b` iff some endpoint lies in `(a,b]` (open rays) or
//! `[a,b)` (closed rays). The nest separates every pair iff `E` has no gap,
//! an open subinterval of the window free of endpoints. Dense intervals
//! have a gap iff they stop short of a window end; progressions and finite
//! lists always have one.
//!
//! Starred conditions for the upper-ray partner `{(e,∞)}` (or `{[e,∞)}`)
//! are decided by applying the table to the mirror image under `x ↦ −x`.

mod field;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use field::FieldElement;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CarrierKind {
    Q,
    Qsqrt2,
}

impl CarrierKind {
    pub fn contains(self, x: &FieldElement) -> bool {
        match self {
            CarrierKind::Q => x.is_rational(),
            CarrierKind::Qsqrt2 => true,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CarrierKind::Q => "ℚ",
            CarrierKind::Qsqrt2 => "ℚ[√2]",
        }
    }
}

/// An open interval; a missing bound is infinite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(default)]
    pub lo: Option<FieldElement>,
    #[serde(default)]
    pub hi: Option<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Carrier {
    pub kind: CarrierKind,
    #[serde(default)]
    pub window: Option<Window>,
}

impl Carrier {
    pub fn line(kind: CarrierKind) -> Self {
        Carrier { kind, window: None }
    }

    pub fn window(kind: CarrierKind, lo: Option<FieldElement>, hi: Option<FieldElement>) -> Self {
        Carrier { kind, window: Some(Window { lo, hi }) }
    }

    pub fn lo(&self) -> Option<&FieldElement> {
        self.window.as_ref().and_then(|w| w.lo.as_ref())
    }

    pub fn hi(&self) -> Option<&FieldElement> {
        self.window.as_ref().and_then(|w| w.hi.as_ref())
    }

    fn interval(&self) -> Interval {
        Interval {
            lo: self.lo().map(|v| (v.clone(), false)),
            hi: self.hi().map(|v| (v.clone(), false)),
        }
    }

    pub fn in_window(&self, x: &FieldElement) -> bool {
        self.lo().is_none_or(|lo| lo < x) && self.hi().is_none_or(|hi| x < hi)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.kind.contains(x) && self.in_window(x)
    }

    fn mirror(&self) -> Carrier {
        Carrier {
            kind: self.kind,
            window: self.window.as_ref().map(|w| Window {
                lo: w.hi.as_ref().map(|v| -v),
                hi: w.lo.as_ref().map(|v| -v),
            }),
        }
    }

    /// Two carrier points `x < y` inside the open gap `(p, q)`, preferably
    /// at the quarter and half marks.
    fn pair_in(&self, p: &FieldElement, q: &FieldElement) -> (FieldElement, FieldElement) {
        let width = q - p;
        let x = p + &width.scale(&ratio(1, 4));
        let y = p + &width.scale(&ratio(1, 2));
        if self.kind.contains(&x) && self.kind.contains(&y) {
            (x, y)
        } else {
            let m = FieldElement::midpoint(p, q);
            (FieldElement::rational_between(p, &m), FieldElement::rational_between(&m, q))
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo(), self.hi()) {
            (None, None) => f.write_str(self.kind.symbol()),
            (lo, hi) => write!(
                f,
                "{} ∩ ({}, {})",
                self.kind.symbol(),
                lo.map_or("−∞".into(), |v| v.to_string()),
                hi.map_or("∞".into(), |v| v.to_string())
            ),
        }
    }
}

fn ratio(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayShape {
    /// `(−∞, e)`
    #[serde(alias = "open")]
    OpenUpper,
    /// `(−∞, e]`
    #[serde(alias = "closed")]
    ClosedUpper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndpointSet {
    /// Every carrier point in the window.
    AllCarrier,
    /// Points of `field` between the bounds; a missing bound is infinite.
    DenseInterval {
        field: CarrierKind,
        #[serde(default)]
        lo: Option<FieldElement>,
        #[serde(default)]
        hi: Option<FieldElement>,
        #[serde(default)]
        lo_closed: bool,
        #[serde(default)]
        hi_closed: bool,
    },
    /// `start + k·step` for `k = 0, 1, 2, …`
    ArithmeticProgression { start: FieldElement, step: FieldElement },
    FiniteList { values: Vec<FieldElement> },
}

/// Interval with optional bounds, each flagged inclusive.
#[derive(Clone, Debug)]
struct Interval {
    lo: Option<(FieldElement, bool)>,
    hi: Option<(FieldElement, bool)>,
}

impl Interval {
    fn between(a: &FieldElement, b: &FieldElement, lo_incl: bool, hi_incl: bool) -> Self {
        Interval { lo: Some((a.clone(), lo_incl)), hi: Some((b.clone(), hi_incl)) }
    }

    fn intersect(&self, other: &Interval) -> Interval {
        fn pick(
            a: &Option<(FieldElement, bool)>,
            b: &Option<(FieldElement, bool)>,
            tighter: std::cmp::Ordering,
        ) -> Option<(FieldElement, bool)> {
            match (a, b) {
                (None, x) | (x, None) => x.clone(),
                (Some((va, ia)), Some((vb, ib))) => match va.cmp(vb) {
                    std::cmp::Ordering::Equal => Some((va.clone(), *ia && *ib)),
                    o if o == tighter => Some((va.clone(), *ia)),
                    _ => Some((vb.clone(), *ib)),
                },
            }
        }
        Interval {
            lo: pick(&self.lo, &other.lo, std::cmp::Ordering::Greater),
            hi: pick(&self.hi, &other.hi, std::cmp::Ordering::Less),
        }
    }

    fn admits(&self, x: &FieldElement) -> bool {
        let above = match &self.lo {
            None => true,
            Some((v, incl)) => v < x || (*incl && v == x),
        };
        let below = match &self.hi {
            None => true,
            Some((v, incl)) => x < v || (*incl && v == x),
        };
        above && below
    }

    /// Some point of `field` in the interval.
    fn point(&self, field: CarrierKind) -> Option<FieldElement> {
        if let Some((v, true)) = &self.lo {
            if field.contains(v) && self.admits(v) {
                return Some(v.clone());
            }
        }
        if let Some((v, true)) = &self.hi {
            if field.contains(v) && self.admits(v) {
                return Some(v.clone());
            }
        }
        let (lo, hi) = match (&self.lo, &self.hi) {
            (Some((l, _)), Some((h, _))) if l >= h => return None,
            (Some((l, _)), Some((h, _))) => (l.clone(), h.clone()),
            (Some((l, _)), None) => (l.clone(), l + &FieldElement::int(1)),
            (None, Some((h, _))) => (h - &FieldElement::int(1), h.clone()),
            (None, None) => (FieldElement::int(-1), FieldElement::int(1)),
        };
        Some(match field {
            CarrierKind::Qsqrt2 => FieldElement::midpoint(&lo, &hi),
            CarrierKind::Q => FieldElement::rational_between(&lo, &hi),
        })
    }

    fn mirror(&self) -> Interval {
        let flip = |b: &Option<(FieldElement, bool)>| b.as_ref().map(|(v, i)| (-v, *i));
        Interval { lo: flip(&self.hi), hi: flip(&self.lo) }
    }
}

/// `⌈z⌉`
fn ceil(z: &FieldElement) -> num_bigint::BigInt {
    -(-z).floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRayNest")]
pub struct RayNest {
    carrier: Carrier,
    shape: RayShape,
    endpoints: EndpointSet,
}

#[derive(Deserialize)]
struct RawRayNest {
    carrier: CarrierKind,
    #[serde(default)]
    window: Option<Window>,
    shape: RayShape,
    endpoints: EndpointSet,
}

impl TryFrom<RawRayNest> for RayNest {
    type Error = Error;
    fn try_from(raw: RawRayNest) -> Result<Self> {
        RayNest::new(Carrier { kind: raw.carrier, window: raw.window }, raw.shape, raw.endpoints)
    }
}

#[derive(Serialize)]
struct RayNestOut<'a> {
    carrier: CarrierKind,
    window: &'a Option<Window>,
    shape: &'static str,
    endpoints: &'a EndpointSet,
}

/// Ray-nest JSON in the input format.
pub fn ray_nest_to_json(n: &RayNest) -> String {
    serde_json::to_string(&RayNestOut {
        carrier: n.carrier.kind,
        window: &n.carrier.window,
        shape: match n.shape {
            RayShape::OpenUpper => "open",
            RayShape::ClosedUpper => "closed",
        },
        endpoints: &n.endpoints,
    })
    .expect("ray nest serializes")
}

pub fn ray_nest_from_json(text: &str) -> Result<RayNest> {
    let raw: RawRayNest = serde_json::from_str(text)?;
    RayNest::try_from(raw)
}

impl RayNest {
    pub fn new(carrier: Carrier, shape: RayShape, endpoints: EndpointSet) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidRayNest(m));
        if let (Some(lo), Some(hi)) = (carrier.lo(), carrier.hi()) {
            if lo >= hi {
                return bad(format!("window ({lo}, {hi}) is empty"));
            }
        }
        match &endpoints {
            EndpointSet::AllCarrier => {}
            EndpointSet::DenseInterval { lo, hi, lo_closed, hi_closed, .. } => {
                if let (Some(l), Some(h)) = (lo, hi) {
                    if l >= h {
                        return bad(format!("endpoint interval from {l} to {h} is empty"));
                    }
                }
                if let Some(w) = carrier.lo() {
                    match lo {
                        Some(l) if l > w || (l == w && !lo_closed) => {}
                        _ => return bad("endpoint interval reaches below the window".into()),
                    }
                }
                if let Some(w) = carrier.hi() {
                    match hi {
                        Some(h) if h < w || (h == w && !hi_closed) => {}
                        _ => return bad("endpoint interval reaches above the window".into()),
                    }
                }
            }
            EndpointSet::ArithmeticProgression { start, step } => {
                if step.is_zero() {
                    return bad("progression step is zero".into());
                }
                if !carrier.in_window(start) {
                    return bad(format!("progression start {start} lies outside the window"));
                }
                let ascending = step > &FieldElement::zero();
                if (ascending && carrier.hi().is_some()) || (!ascending && carrier.lo().is_some()) {
                    return bad("progression runs out of the window".into());
                }
            }
            EndpointSet::FiniteList { values } => {
                if let Some(v) = values.iter().find(|v| !carrier.in_window(v)) {
                    return bad(format!("endpoint {v} lies outside the window"));
                }
            }
        }
        let endpoints = match endpoints {
            EndpointSet::FiniteList { mut values } => {
                values.sort();
                values.dedup();
                EndpointSet::FiniteList { values }
            }
            e => e,
        };
        Ok(RayNest { carrier, shape, endpoints })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn shape(&self) -> RayShape {
        self.shape
    }

    pub fn endpoints(&self) -> &EndpointSet {
        &self.endpoints
    }

    pub fn with_carrier_kind(&self, kind: CarrierKind) -> Result<RayNest> {
        let carrier = Carrier { kind, window: self.carrier.window.clone() };
        RayNest::new(carrier, self.shape, self.endpoints.clone())
    }

    pub fn is_endpoint(&self, e: &FieldElement) -> bool {
        self.endpoint_in(&Interval::between(e, e, true, true)).is_some()
    }

    fn has_endpoints(&self) -> bool {
        !matches!(&self.endpoints, EndpointSet::FiniteList { values } if values.is_empty())
    }

    fn any_endpoint(&self) -> Option<FieldElement> {
        self.endpoint_in(&Interval { lo: None, hi: None })
    }

    /// An endpoint inside `iv`, if there is one.
    fn endpoint_in(&self, iv: &Interval) -> Option<FieldElement> {
        match &self.endpoints {
            EndpointSet::AllCarrier => {
                iv.intersect(&self.carrier.interval()).point(self.carrier.kind)
            }
            EndpointSet::DenseInterval { field, lo, hi, lo_closed, hi_closed } => {
                let e = Interval {
                    lo: lo.as_ref().map(|v| (v.clone(), *lo_closed)),
                    hi: hi.as_ref().map(|v| (v.clone(), *hi_closed)),
                };
                iv.intersect(&e).point(*field)
            }
            EndpointSet::ArithmeticProgression { start, step } => {
                if step > &FieldElement::zero() {
                    progression_in(start, step, iv)
                } else {
                    progression_in(&-start, &-step, &iv.mirror()).map(|v| -v)
                }
            }
            EndpointSet::FiniteList { values } => values.iter().find(|v| iv.admits(v)).cloned(),
        }
    }

    /// `x ⊲ y` in the generated order.
    pub fn related(&self, x: &FieldElement, y: &FieldElement) -> Result<bool> {
        for p in [x, y] {
            if !self.carrier.contains(p) {
                return Err(Error::OutsideWindow);
            }
        }
        if x >= y {
            return Ok(false);
        }
        let iv = match self.shape {
            RayShape::OpenUpper => Interval::between(x, y, false, true),
            RayShape::ClosedUpper => Interval::between(x, y, true, false),
        };
        Ok(self.endpoint_in(&iv).is_some())
    }

    /// An open subinterval of the window with no endpoint inside.
    fn gap(&self) -> Option<(Option<FieldElement>, Option<FieldElement>)> {
        let (wlo, whi) = (self.carrier.lo().cloned(), self.carrier.hi().cloned());
        match &self.endpoints {
            EndpointSet::AllCarrier => None,
            EndpointSet::DenseInterval { lo, hi, .. } => {
                let below = (lo.is_some() && lo.as_ref() != wlo.as_ref()).then(|| (wlo.clone(), lo.clone()));
                let above = (hi.is_some() && hi.as_ref() != whi.as_ref()).then(|| (hi.clone(), whi.clone()));
                prefer_bounded([below, above].into_iter().flatten())
            }
            EndpointSet::ArithmeticProgression { start, step } => {
                let next = start + step;
                let (p, q) = if step > &FieldElement::zero() { (start.clone(), next) } else { (next, start.clone()) };
                Some((Some(p), Some(q)))
            }
            EndpointSet::FiniteList { values } => {
                let mut gaps = Vec::new();
                for w in values.windows(2) {
                    gaps.push((Some(w[0].clone()), Some(w[1].clone())));
                }
                match (values.first(), values.last()) {
                    (Some(first), Some(last)) => {
                        gaps.push((wlo.clone(), Some(first.clone())));
                        gaps.push((Some(last.clone()), whi.clone()));
                    }
                    _ => gaps.push((wlo.clone(), whi.clone())),
                }
                prefer_bounded(gaps.into_iter())
            }
        }
    }

    /// Carrier points `x < y` that no ray separates.
    pub fn unseparated_pair(&self) -> Option<(FieldElement, FieldElement)> {
        let one = FieldElement::int(1);
        let (p, q) = match self.gap()? {
            (Some(p), Some(q)) => (p, q),
            (None, Some(q)) => (&q - &one, q),
            (Some(p), None) => (p.clone(), &p + &one),
            (None, None) => (FieldElement::zero(), one),
        };
        Some(self.carrier.pair_in(&p, &q))
    }

    /// Mirror image under `x ↦ −x`: the upper-ray partner recast as lower rays.
    pub fn mirror(&self) -> RayNest {
        let endpoints = match &self.endpoints {
            EndpointSet::AllCarrier => EndpointSet::AllCarrier,
            EndpointSet::DenseInterval { field, lo, hi, lo_closed, hi_closed } => {
                EndpointSet::DenseInterval {
                    field: *field,
                    lo: hi.as_ref().map(|v| -v),
                    hi: lo.as_ref().map(|v| -v),
                    lo_closed: *hi_closed,
                    hi_closed: *lo_closed,
                }
            }
            EndpointSet::ArithmeticProgression { start, step } => {
                EndpointSet::ArithmeticProgression { start: -start, step: -step }
            }
            EndpointSet::FiniteList { values } => {
                let mut values: Vec<_> = values.iter().map(|v| -v).collect();
                values.sort();
                EndpointSet::FiniteList { values }
            }
        };
        RayNest { carrier: self.carrier.mirror(), shape: self.shape, endpoints }
    }

    /// An endpoint outside the carrier field.
    fn foreign_endpoint(&self) -> Option<FieldElement> {
        let k = self.carrier.kind;
        if k == CarrierKind::Qsqrt2 {
            return None;
        }
        match &self.endpoints {
            EndpointSet::AllCarrier => None,
            EndpointSet::DenseInterval { field: CarrierKind::Q, .. } => None,
            EndpointSet::DenseInterval { lo, hi, .. } => Some(irrational_inside(lo.as_ref(), hi.as_ref())),
            EndpointSet::ArithmeticProgression { start, step } => {
                [start.clone(), start + step].into_iter().find(|v| !k.contains(v))
            }
            EndpointSet::FiniteList { values } => values.iter().find(|v| !k.contains(v)).cloned(),
        }
    }

    fn covers_window(&self) -> bool {
        match &self.endpoints {
            EndpointSet::AllCarrier => true,
            EndpointSet::DenseInterval { field, lo, hi, .. } => {
                let field_ok = *field == CarrierKind::Qsqrt2 || self.carrier.kind == CarrierKind::Q;
                field_ok && lo.as_ref() == self.carrier.lo() && hi.as_ref() == self.carrier.hi()
            }
            EndpointSet::ArithmeticProgression { .. } | EndpointSet::FiniteList { .. } => false,
        }
    }
}

fn prefer_bounded(
    gaps: impl Iterator<Item = (Option<FieldElement>, Option<FieldElement>)>,
) -> Option<(Option<FieldElement>, Option<FieldElement>)> {
    let all: Vec<_> = gaps.collect();
    all.iter().find(|(p, q)| p.is_some() && q.is_some()).or(all.first()).cloned()
}

/// First term of an ascending progression inside `iv`.
fn progression_in(start: &FieldElement, step: &FieldElement, iv: &Interval) -> Option<FieldElement> {
    let k = match &iv.lo {
        None => num_bigint::BigInt::from(0),
        Some((lo, incl)) => {
            let t = &(lo - start) / step;
            let k = if *incl { ceil(&t) } else { t.floor() + 1 };
            k.max(0.into())
        }
    };
    let v = start + &step.scale(&num_rational::BigRational::from_integer(k));
    iv.admits(&v).then_some(v)
}

/// An irrational point strictly inside the given bounds.
fn irrational_inside(lo: Option<&FieldElement>, hi: Option<&FieldElement>) -> FieldElement {
    let one = FieldElement::int(1);
    let c = match (lo, hi) {
        (Some(l), Some(h)) => FieldElement::rational_between(l, h),
        (Some(l), None) => FieldElement::rational_between(l, &(l + &one)),
        (None, Some(h)) => FieldElement::rational_between(&(h - &one), h),
        (None, None) => FieldElement::zero(),
    };
    let mut delta = FieldElement::sqrt2();
    loop {
        let cand = &c + &delta;
        if hi.is_none_or(|h| &cand < h) {
            return cand;
        }
        delta = delta.scale(&ratio(1, 2));
    }
}

/// `x ∈ (−∞,e)` or `x ∈ (−∞,e]` for a carrier point `x`.
pub fn ray_member(x: &FieldElement, e: &FieldElement, shape: RayShape, carrier: &Carrier) -> Result<bool> {
    if !carrier.contains(x) {
        return Err(Error::OutsideWindow);
    }
    Ok(match shape {
        RayShape::OpenUpper => x < e,
        RayShape::ClosedUpper => x <= e,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub holds: bool,
    /// Carrier points `x < y` with `x ⋪ y`.
    pub witness: Option<(FieldElement, FieldElement)>,
}

/// Whether `⊲` equals the carrier's `<`. Every generated pair is a `<`
/// pair, so equality fails exactly on an unseparated pair.
pub fn ray_generated_order_is_carrier_order(n: &RayNest) -> OrderCertificate {
    let witness = n.unseparated_pair();
    OrderCertificate { holds: witness.is_none(), witness }
}

pub fn ray_t0_separating(n: &RayNest) -> bool {
    n.unseparated_pair().is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayConditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    /// An endpoint with no supremum in the carrier.
    pub c1_witness: Option<FieldElement>,
}

pub fn ray_check_conditions(n: &RayNest) -> RayConditions {
    let c1_witness = n.foreign_endpoint();
    let c1 = c1_witness.is_none();
    let c2 = c1 && n.shape == RayShape::OpenUpper;
    let c3 = c2 && n.covers_window();
    RayConditions { c1, c2, c3, c1_witness }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayDualReport {
    pub t0: bool,
    pub t0_star: bool,
    pub conditions: RayConditions,
    pub star_conditions: RayConditions,
}

/// Classify a ray nest and its upper-ray partner.
pub fn ray_dual_pair(n: &RayNest) -> RayDualReport {
    let m = n.mirror();
    RayDualReport {
        t0: ray_t0_separating(n),
        t0_star: ray_t0_separating(&m),
        conditions: ray_check_conditions(n),
        star_conditions: ray_check_conditions(&m),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOp {
    Add,
    Multiply,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatTriple {
    pub a: FieldElement,
    pub b: FieldElement,
    pub g: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayGroupCompat {
    pub compatible: bool,
    /// Every translate of a ray is again a ray.
    pub translation_closed: bool,
    /// `a ⊲ b` while `a∘g ⋪ b∘g`.
    pub witness: Option<CompatTriple>,
}

/// A carrier point in `[e, e + w)` when `closed_at_e`, else in `(e, e + w)`, never zero.
fn point_after(k: CarrierKind, e: &FieldElement, w: &FieldElement, closed_at_e: bool) -> FieldElement {
    if closed_at_e && k.contains(e) && !e.is_zero() {
        return e.clone();
    }
    let hi = e + w;
    let c = FieldElement::rational_between(e, &hi);
    if c.is_zero() {
        FieldElement::rational_between(&c, &hi)
    } else {
        c
    }
}

/// Compatibility of `⊲` with addition or multiplication on the full line.
pub fn ray_group_compat(op: GroupOp, n: &RayNest) -> Result<RayGroupCompat> {
    if n.carrier.window.as_ref().is_some_and(|w| w.lo.is_some() || w.hi.is_some()) {
        return Err(Error::Unsupported("group operations need the full line as carrier".into()));
    }
    let k = n.carrier.kind;
    let Some(e) = n.any_endpoint() else {
        // No rays: the order is empty and every translate of nothing is nothing.
        return Ok(RayGroupCompat { compatible: true, translation_closed: true, witness: None });
    };
    debug_assert!(n.has_endpoints());
    match op {
        GroupOp::Add => {
            let translation_closed = match &n.endpoints {
                EndpointSet::AllCarrier => true,
                EndpointSet::DenseInterval { field, lo: None, hi: None, .. } => {
                    *field == CarrierKind::Qsqrt2 || k == CarrierKind::Q
                }
                _ => false,
            };
            let Some((x, y)) = n.unseparated_pair() else {
                return Ok(RayGroupCompat { compatible: true, translation_closed, witness: None });
            };
            let w = &y - &x;
            let (a, b, g) = match n.shape {
                RayShape::OpenUpper => {
                    let b = if k.contains(&e) { e.clone() } else { FieldElement::rational_between(&e, &(&e + &w)) };
                    let a = &b - &w;
                    let g = &y - &b;
                    (a, b, g)
                }
                RayShape::ClosedUpper => {
                    let a = if k.contains(&e) { e.clone() } else { FieldElement::rational_between(&(&e - &w), &e) };
                    let b = &a + &w;
                    let g = &x - &a;
                    (a, b, g)
                }
            };
            Ok(RayGroupCompat { compatible: false, translation_closed, witness: Some(CompatTriple { a, b, g }) })
        }
        GroupOp::Multiply => {
            let one = FieldElement::int(1);
            let (a, b) = match n.shape {
                RayShape::OpenUpper => {
                    let b = point_after(k, &e, &one, true);
                    let a = -point_after(k, &-&e, &one, false);
                    (a, b)
                }
                RayShape::ClosedUpper => {
                    let a = -point_after(k, &-&e, &one, true);
                    let b = point_after(k, &e, &one, false);
                    (a, b)
                }
            };
            let g = -one;
            Ok(RayGroupCompat { compatible: false, translation_closed: false, witness: Some(CompatTriple { a, b, g }) })
        }
    }
}

/// Result of `a∘g` for the given operation.
pub fn apply_op(op: GroupOp, a: &FieldElement, g: &FieldElement) -> FieldElement {
    match op {
        GroupOp::Add => a + g,
        GroupOp::Multiply => a * g,
    }
}

/// Random ray nests over small rational and quadratic endpoints.
pub fn random_ray_nest<R: rand::Rng>(rng: &mut R) -> RayNest {
    let elem = |rng: &mut R, irrational: bool| {
        let a = FieldElement::frac(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        if irrational {
            &a + &FieldElement::sqrt2().scale(&ratio(rng.gen_range(-2..=2), rng.gen_range(1..=3)))
        } else {
            a
        }
    };
    loop {
        let kind = if rng.gen_bool(0.5) { CarrierKind::Q } else { CarrierKind::Qsqrt2 };
        let irr = rng.gen_bool(0.3);
        let shape = if rng.gen_bool(0.5) { RayShape::OpenUpper } else { RayShape::ClosedUpper };
        let window = match rng.gen_range(0..4) {
            0 => None,
            1 => Some(Window { lo: Some(elem(rng, irr)), hi: None }),
            2 => Some(Window { lo: None, hi: Some(elem(rng, irr)) }),
            _ => Some(Window { lo: Some(elem(rng, irr)), hi: Some(elem(rng, irr)) }),
        };
        let carrier = Carrier { kind, window };
        let endpoints = match rng.gen_range(0..4) {
            0 => EndpointSet::AllCarrier,
            1 => {
                let field = if rng.gen_bool(0.5) { CarrierKind::Q } else { CarrierKind::Qsqrt2 };
                let lo = match carrier.lo() {
                    Some(w) if rng.gen_bool(0.5) => Some(w.clone()),
                    _ if rng.gen_bool(0.3) && carrier.lo().is_none() => None,
                    _ => Some(elem(rng, irr)),
                };
                let hi = match carrier.hi() {
                    Some(w) if rng.gen_bool(0.5) => Some(w.clone()),
                    _ if rng.gen_bool(0.3) && carrier.hi().is_none() => None,
                    _ => Some(elem(rng, irr)),
                };
                let lo_closed = rng.gen_bool(0.5) && lo.as_ref() != carrier.lo();
                let hi_closed = rng.gen_bool(0.5) && hi.as_ref() != carrier.hi();
                EndpointSet::DenseInterval { field, lo, hi, lo_closed, hi_closed }
            }
            2 => EndpointSet::ArithmeticProgression { start: elem(rng, irr), step: elem(rng, irr) },
            _ => {
                let len = rng.gen_range(0..4);
                EndpointSet::FiniteList { values: (0..len).map(|_| elem(rng, irr)).collect() }
            }
        };
        if let Ok(n) = RayNest::new(carrier, shape, endpoints) {
            return n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_window(kind: CarrierKind) -> Carrier {
        Carrier::window(kind, Some(FieldElement::zero()), Some(FieldElement::int(1)))
    }

    fn half_to_one() -> EndpointSet {
        EndpointSet::DenseInterval {
            field: CarrierKind::Qsqrt2,
            lo: Some(FieldElement::frac(1, 2)),
            hi: Some(FieldElement::int(1)),
            lo_closed: true,
            hi_closed: false,
        }
    }

    fn naturals() -> EndpointSet {
        EndpointSet::ArithmeticProgression { start: FieldElement::zero(), step: FieldElement::int(1) }
    }

    fn line(shape: RayShape, endpoints: EndpointSet) -> RayNest {
        RayNest::new(Carrier::line(CarrierKind::Qsqrt2), shape, endpoints).unwrap()
    }

    #[test]
    fn membership() {
        let c = Carrier::line(CarrierKind::Qsqrt2);
        let one = FieldElement::int(1);
        assert!(ray_member(&FieldElement::frac(1, 2), &one, RayShape::OpenUpper, &c).unwrap());
        assert!(ray_member(&FieldElement::sqrt2(), &FieldElement::int(2), RayShape::OpenUpper, &c).unwrap());
        assert!(!ray_member(&one, &one, RayShape::OpenUpper, &c).unwrap());
        assert!(ray_member(&one, &one, RayShape::ClosedUpper, &c).unwrap());
        let u = unit_window(CarrierKind::Q);
        assert_eq!(ray_member(&one, &one, RayShape::OpenUpper, &u), Err(Error::OutsideWindow));
        assert_eq!(
            ray_member(&FieldElement::from_parts((0, 1), (1, 2)), &one, RayShape::OpenUpper, &u),
            Err(Error::OutsideWindow)
        );
    }

    #[test]
    fn closed_rays_on_unit_window() {
        let n = RayNest::new(unit_window(CarrierKind::Qsqrt2), RayShape::ClosedUpper, half_to_one()).unwrap();
        let c = ray_check_conditions(&n);
        assert!(c.c1 && !c.c2 && !c.c3);
        assert_eq!(n.unseparated_pair(), Some((FieldElement::frac(1, 8), FieldElement::frac(1, 4))));
        assert!(!ray_t0_separating(&n));
    }

    #[test]
    fn open_rays_on_unit_window() {
        let n = RayNest::new(unit_window(CarrierKind::Qsqrt2), RayShape::OpenUpper, half_to_one()).unwrap();
        let c = ray_check_conditions(&n);
        assert!(c.c1 && c.c2 && !c.c3);
        assert!(!ray_t0_separating(&n));
        assert!(!n.is_endpoint(&FieldElement::frac(1, 4)));
    }

    #[test]
    fn all_closed_rays_separate_but_fail_c2() {
        let n = line(RayShape::ClosedUpper, EndpointSet::AllCarrier);
        assert!(ray_t0_separating(&n));
        let c = ray_check_conditions(&n);
        assert!(c.c1 && !c.c2);
    }

    #[test]
    fn real_endpoints_over_rationals() {
        let e = EndpointSet::DenseInterval {
            field: CarrierKind::Qsqrt2,
            lo: None,
            hi: None,
            lo_closed: false,
            hi_closed: false,
        };
        let n = RayNest::new(Carrier::line(CarrierKind::Q), RayShape::OpenUpper, e).unwrap();
        assert!(ray_t0_separating(&n));
        assert!(ray_generated_order_is_carrier_order(&n).holds);
        let c = ray_check_conditions(&n);
        assert!(!c.c1);
        assert_eq!(c.c1_witness, Some(FieldElement::sqrt2()));

        let single = EndpointSet::FiniteList { values: vec![FieldElement::sqrt2()] };
        let n = RayNest::new(Carrier::line(CarrierKind::Q), RayShape::OpenUpper, single).unwrap();
        assert!(!ray_check_conditions(&n).c1);
    }

    #[test]
    fn naturals_pair() {
        let n = line(RayShape::OpenUpper, naturals());
        let r = ray_dual_pair(&n);
        assert!(r.conditions.c2 && r.star_conditions.c2);
        assert!(!r.t0 && !r.t0_star);
        assert!(!r.conditions.c3 && !r.star_conditions.c3);
        let cert = ray_generated_order_is_carrier_order(&n);
        assert_eq!(cert.witness, Some((FieldElement::frac(1, 4), FieldElement::frac(1, 2))));
    }

    #[test]
    fn full_line_pair() {
        for kind in [CarrierKind::Q, CarrierKind::Qsqrt2] {
            let n = RayNest::new(Carrier::line(kind), RayShape::OpenUpper, EndpointSet::AllCarrier).unwrap();
            let r = ray_dual_pair(&n);
            assert!(r.conditions.c3 && r.star_conditions.c3 && r.t0 && r.t0_star);
            assert!(ray_generated_order_is_carrier_order(&n).holds);
        }
    }

    #[test]
    fn finite_lists_are_never_separating() {
        let n = line(RayShape::OpenUpper, EndpointSet::FiniteList { values: vec![FieldElement::int(3)] });
        let (x, y) = ray_generated_order_is_carrier_order(&n).witness.unwrap();
        assert!(y < FieldElement::int(3));
        assert!(!n.related(&x, &y).unwrap());
        let r = ray_dual_pair(&n);
        assert_eq!(r.t0, r.t0_star);
    }

    #[test]
    fn addition_is_compatible_on_all_rays() {
        let n = line(RayShape::OpenUpper, EndpointSet::AllCarrier);
        let r = ray_group_compat(GroupOp::Add, &n).unwrap();
        assert!(r.compatible && r.translation_closed);
    }

    #[test]
    fn multiplication_is_not() {
        let n = line(RayShape::OpenUpper, EndpointSet::AllCarrier);
        let r = ray_group_compat(GroupOp::Multiply, &n).unwrap();
        assert!(!r.compatible && !r.translation_closed);
        let w = r.witness.unwrap();
        assert!(w.g < FieldElement::zero());
        assert!(n.related(&w.a, &w.b).unwrap());
        let (ag, bg) = (apply_op(GroupOp::Multiply, &w.a, &w.g), apply_op(GroupOp::Multiply, &w.b, &w.g));
        assert!(!n.related(&ag, &bg).unwrap());
    }

    #[test]
    fn natural_endpoints_break_addition() {
        let n = line(RayShape::OpenUpper, naturals());
        let r = ray_group_compat(GroupOp::Add, &n).unwrap();
        assert!(!r.compatible && !r.translation_closed);
        // Integer shifts alone do not rescue it: 1/2 ⊲ 1 but -3/2 ⋪ -1.
        let (a, b, g) = (FieldElement::frac(1, 2), FieldElement::int(1), FieldElement::int(-2));
        assert!(n.related(&a, &b).unwrap());
        assert!(!n.related(&(&a + &g), &(&b + &g)).unwrap());
    }

    #[test]
    fn windowed_groups_unsupported() {
        let n = RayNest::new(unit_window(CarrierKind::Q), RayShape::OpenUpper, half_to_one()).unwrap();
        assert!(matches!(ray_group_compat(GroupOp::Add, &n), Err(Error::Unsupported(_))));
    }

    #[test]
    fn invalid_nests_rejected() {
        let c = unit_window(CarrierKind::Q);
        assert!(RayNest::new(c.clone(), RayShape::OpenUpper, naturals()).is_err());
        let outside = EndpointSet::FiniteList { values: vec![FieldElement::int(2)] };
        assert!(RayNest::new(c.clone(), RayShape::OpenUpper, outside).is_err());
        let zero_step = EndpointSet::ArithmeticProgression { start: FieldElement::zero(), step: FieldElement::zero() };
        assert!(RayNest::new(Carrier::line(CarrierKind::Q), RayShape::OpenUpper, zero_step).is_err());
        let empty_window = Carrier::window(CarrierKind::Q, Some(FieldElement::int(1)), Some(FieldElement::int(1)));
        assert!(RayNest::new(empty_window, RayShape::OpenUpper, EndpointSet::AllCarrier).is_err());
    }

    #[test]
    fn json_round_trip() {
        let n = RayNest::new(unit_window(CarrierKind::Qsqrt2), RayShape::ClosedUpper, half_to_one()).unwrap();
        let text = ray_nest_to_json(&n);
        assert_eq!(ray_nest_from_json(&text).unwrap(), n);
        let literal = r#"{"carrier":"Q","window":null,"shape":"open",
            "endpoints":{"kind":"arithmetic_progression","start":{"a":[0,1],"b":[0,1]},"step":{"a":[1,1],"b":[0,1]}}}"#;
        let n = ray_nest_from_json(literal).unwrap();
        assert!(ray_check_conditions(&n).c2);
        assert!(ray_nest_from_json(r#"{"carrier":"R","shape":"open","endpoints":{"kind":"all_carrier"}}"#).is_err());
    }

    fn seeds() -> impl Strategy<Value = u64> {
        any::<u64>()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn implication_chain(seed in seeds()) {
            let n = random_ray_nest(&mut ChaCha8Rng::seed_from_u64(seed));
            let c = ray_check_conditions(&n);
            prop_assert!(!c.c3 || c.c2);
            prop_assert!(!c.c2 || c.c1);
            prop_assert!(!c.c3 || ray_t0_separating(&n));
        }

        #[test]
        fn mirror_is_an_involution(seed in seeds()) {
            let n = random_ray_nest(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(n.mirror().mirror(), n.clone());
            let r = ray_dual_pair(&n.mirror());
            let s = ray_dual_pair(&n);
            prop_assert_eq!(r.conditions, s.star_conditions);
            prop_assert_eq!(r.t0, s.t0_star);
        }

        #[test]
        fn gap_witness_is_unseparated(seed in seeds()) {
            let n = random_ray_nest(&mut ChaCha8Rng::seed_from_u64(seed));
            if let Some((x, y)) = n.unseparated_pair() {
                prop_assert!(x < y);
                prop_assert!(n.carrier().contains(&x) && n.carrier().contains(&y));
                prop_assert!(!n.related(&x, &y).unwrap());
            }
        }

        #[test]
        fn generated_order_below_carrier_order(seed in seeds(), i in 0usize..40, j in 0usize..40) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = random_ray_nest(&mut rng);
            let (lo, hi) = match (n.carrier().lo().cloned(), n.carrier().hi().cloned()) {
                (Some(l), Some(h)) => (l, h),
                (Some(l), None) => (l.clone(), &l + &FieldElement::int(20)),
                (None, Some(h)) => (&h - &FieldElement::int(20), h),
                (None, None) => (FieldElement::int(-10), FieldElement::int(10)),
            };
            let at = |k: usize| {
                let t = &lo + &(&hi - &lo).scale(&ratio(k as i64 + 1, 42));
                if n.carrier().kind.contains(&t) { t } else { FieldElement::rational_between(&t, &(&t + &(&hi - &lo).scale(&ratio(1, 84)))) }
            };
            let (x, y) = (at(i), at(j));
            if n.related(&x, &y).unwrap() {
                prop_assert!(x < y);
            }
            if ray_t0_separating(&n) && x < y {
                prop_assert!(n.related(&x, &y).unwrap());
            }
        }

        #[test]
        fn carriers_agree_on_rational_endpoints(seed in seeds()) {
            let n = random_ray_nest(&mut ChaCha8Rng::seed_from_u64(seed));
            let rational_only = match n.endpoints() {
                EndpointSet::AllCarrier => false,
                EndpointSet::DenseInterval { field, .. } => *field == CarrierKind::Q,
                EndpointSet::ArithmeticProgression { start, step } => start.is_rational() && step.is_rational(),
                EndpointSet::FiniteList { values } => values.iter().all(FieldElement::is_rational),
            };
            prop_assume!(rational_only);
            let q = n.with_carrier_kind(CarrierKind::Q).unwrap();
            let r = n.with_carrier_kind(CarrierKind::Qsqrt2).unwrap();
            let (cq, cr) = (ray_check_conditions(&q), ray_check_conditions(&r));
            prop_assert_eq!(ray_t0_separating(&q), ray_t0_separating(&r));
            prop_assert_eq!(cq.c1, cr.c1);
            prop_assert_eq!(cq.c2, cr.c2);
            // Rational endpoints never reach the irrational points of the larger carrier.
            prop_assert!(!cr.c3);
            if !matches!(n.endpoints(), EndpointSet::DenseInterval { .. }) {
                prop_assert!(!cq.c3);
            }
        }
    }
}

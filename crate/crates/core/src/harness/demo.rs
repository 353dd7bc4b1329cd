//! Worked examples with their stated values.

use std::fmt::Display;

use serde::Serialize;

use crate::analysis::{
    conditions, make_dual_pair, pair_topologies, starred_conditions, sup_wrt, DualNestPair,
};
use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset, Universe};
use crate::ray::{
    apply_op, ray_check_conditions, ray_dual_pair, ray_generated_order_is_carrier_order,
    ray_group_compat, ray_t0_separating, Carrier, CarrierKind, EndpointSet, FieldElement, GroupOp,
    RayNest, RayShape,
};
use crate::relation::{generated_order, t0_separates};
use crate::topology::Topology;

/// Registered example ids.
pub const DEMO_IDS: &[&str] =
    &["2.2", "3.1", "3.2", "3.4", "3.5", "3.6", "3.7", "3.8", "3.9", "5.1", "5.2"];

fn canonical(id: &str) -> Option<&'static str> {
    let id = match id {
        "2.x" => "2.2",
        "3.3" => "3.4",
        other => other,
    };
    DEMO_IDS.iter().copied().find(|d| *d == id)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoCheck {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoReport {
    pub id: String,
    pub title: String,
    pub lines: Vec<String>,
    pub checks: Vec<DemoCheck>,
}

impl DemoReport {
    fn new(id: &str, title: &str) -> Self {
        DemoReport { id: id.to_string(), title: title.to_string(), lines: vec![], checks: vec![] }
    }

    fn line(&mut self, label: &str, value: impl Display) {
        self.lines.push(format!("{label} = {value}"));
    }

    fn check(&mut self, label: &str, expected: impl Display, computed: impl Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.checks.push(DemoCheck { label: label.to_string(), expected, computed, pass });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = format!("Example {}: {}\n", self.id, self.title);
        for l in &self.lines {
            out += &format!("  {l}\n");
        }
        let width = self.checks.iter().map(|c| c.label.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let pad = " ".repeat(width - c.label.chars().count());
            out += &format!(
                "  {} {}{pad}  expected {}  computed {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.label,
                c.expected,
                c.computed
            );
        }
        out
    }
}

pub fn demo(id: &str) -> Result<DemoReport> {
    let id = canonical(id).ok_or_else(|| Error::UnknownName(id.to_string()))?;
    match id {
        "2.2" => usual_order(),
        "3.1" => unit_interval(RayShape::ClosedUpper),
        "3.2" => unit_interval(RayShape::OpenUpper),
        "3.4" => two_points(),
        "3.5" => closed_line(),
        "3.6" => rationals(),
        "3.7" => ex37(),
        "3.8" => ex38(),
        "3.9" => naturals(),
        "5.1" => group_example(GroupOp::Add),
        "5.2" => group_example(GroupOp::Multiply),
        _ => unreachable!(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn stated_topology(u: &Universe, opens: &[&[usize]]) -> String {
    SetFamily::from_indices(u, opens)
        .and_then(Topology::from_opens)
        .map_or_else(|e| format!("invalid ({e})"), |t| t.roster())
}

fn sup_text(nest: &Nest, s: Subset) -> String {
    let le = generated_order(nest).reflexive_closure();
    sup_wrt(s, &le).element.map_or_else(|| "none".to_string(), |k| nest.universe().label(k))
}

fn pair_lines(r: &mut DemoReport, pair: &DualNestPair) -> Result<()> {
    let u = pair.left().universe();
    let t = pair_topologies(pair)?;
    r.line("L", pair.left().roster());
    r.line("R", pair.right().roster());
    r.line("⊲_L", generated_order(pair.left()).roster(u));
    r.line("T_L", t.left.roster());
    r.line("T_l", t.lower.roster());
    r.line("T_R", t.right.roster());
    r.line("T_U", t.upper.roster());
    r.line("T_L∪R", t.combined.roster());
    r.line("T_in", t.interval.roster());
    Ok(())
}

fn two_points() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.4", "X = {a,b}, L = {{a}}");
    let u = Universe::with_labels(["a", "b"])?;
    let l = Nest::from_indices(&u, &[&[0]])?;
    let c = conditions(&l);
    r.line("L", l.roster());
    r.line("⊲_L", generated_order(&l).roster(&u));
    r.line("sup {a}", sup_text(&l, Subset::singleton(0)));
    r.line("conditions", format!("C1 {} C2 {} C3 {}", c.c1, c.c2, c.c3));
    r.check("T0", "true", yes(t0_separates(&l)));
    r.check("C3", "false", yes(c.c3));
    r.check("sup {a}", "a", sup_text(&l, Subset::singleton(0)));
    let b_is_sup = c.sups.iter().any(|s| s.element == Some(1));
    r.check("b is a member sup", "false", yes(b_is_sup));
    Ok(r)
}

fn ex37() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.7", "X = {x1,x2}, L = {{x1}}, R = {{x2}}");
    let u = Universe::with_labels(["x1", "x2"])?;
    let pair = make_dual_pair(&Nest::from_indices(&u, &[&[0]])?, &Nest::from_indices(&u, &[&[1]])?)?;
    pair_lines(&mut r, &pair)?;
    r.lines.push("T_R is stated without ∅; it is compared with ∅ included".to_string());
    let t = pair_topologies(&pair)?;
    let c = conditions(pair.left());
    r.check("T_L", stated_topology(&u, &[&[0], &[0, 1], &[]]), t.left.roster());
    r.check("T_l", stated_topology(&u, &[&[], &[0], &[0, 1]]), t.lower.roster());
    r.check("T_R", stated_topology(&u, &[&[], &[1], &[0, 1]]), t.right.roster());
    r.check("T_U", stated_topology(&u, &[&[], &[1], &[0, 1]]), t.upper.roster());
    r.check("T_L∪R discrete", "true", yes(t.combined.is_discrete()));
    r.check("T_L∪R = T_in", "true", yes(t.combined == t.interval));
    r.check("C3", "false", yes(c.c3));
    Ok(r)
}

fn ex38() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.8", "X = {x1,x2,x3,x4}, L = {{x1,x2},X}, R = {{x3,x4},X}");
    let u = Universe::with_labels(["x1", "x2", "x3", "x4"])?;
    let l = Nest::from_indices(&u, &[&[0, 1], &[0, 1, 2, 3]])?;
    let rn = Nest::from_indices(&u, &[&[2, 3], &[0, 1, 2, 3]])?;
    let pair = make_dual_pair(&l, &rn)?;
    pair_lines(&mut r, &pair)?;
    let t = pair_topologies(&pair)?;
    let c = conditions(&l);
    let cs = starred_conditions(&pair)?;
    let all = [0, 1, 2, 3];
    r.check("T_L", stated_topology(&u, &[&[], &[0, 1], &all]), t.left.roster());
    r.check(
        "T_l",
        stated_topology(&u, &[&[], &[0], &[1], &[0, 1], &[0, 1, 2], &[0, 1, 3], &all]),
        t.lower.roster(),
    );
    r.check("|T_l|", 7, t.lower.len());
    r.check("T_R", stated_topology(&u, &[&[], &[2, 3], &all]), t.right.roster());
    r.check(
        "T_U",
        stated_topology(&u, &[&[], &[1, 2, 3], &[0, 2, 3], &[2], &[3], &[2, 3], &all]),
        t.upper.roster(),
    );
    r.check("|T_U|", 7, t.upper.len());
    r.check("T_in discrete", "true", yes(t.interval.is_discrete()));
    r.check("T_L ⊊ T_l", "true", yes(t.lower.is_finer_or_equal(&t.left) && t.lower != t.left));
    r.check("T_R ⊊ T_U", "true", yes(t.upper.is_finer_or_equal(&t.right) && t.upper != t.right));
    r.check("T_L∪R ⊊ T_in", "true", yes(t.interval.is_finer_or_equal(&t.combined) && t.interval != t.combined));
    r.check("L T0", "false", yes(t0_separates(&l)));
    r.check("sup {x1,x2}", "none", sup_text(&l, Subset::from_indices([0, 1])));
    r.check("C2", "false", yes(c.c2));
    r.check("R T0", "false", yes(t0_separates(&rn)));
    r.check("C2*", "false", yes(cs.c2));
    Ok(r)
}

fn q2(kind: CarrierKind) -> Carrier {
    Carrier::line(kind)
}

fn unit_interval(shape: RayShape) -> Result<DemoReport> {
    let closed = shape == RayShape::ClosedUpper;
    let (id, title) = if closed {
        ("3.1", "X = (0,1), L = {(0,a] : 1/2 ≤ a < 1}")
    } else {
        ("3.2", "X = (0,1), L = {(0,a) : 1/2 ≤ a < 1}")
    };
    let mut r = DemoReport::new(id, title);
    let carrier =
        Carrier::window(CarrierKind::Qsqrt2, Some(FieldElement::zero()), Some(FieldElement::int(1)));
    let endpoints = EndpointSet::DenseInterval {
        field: CarrierKind::Qsqrt2,
        lo: Some(FieldElement::frac(1, 2)),
        hi: Some(FieldElement::int(1)),
        lo_closed: true,
        hi_closed: false,
    };
    let n = RayNest::new(carrier, shape, endpoints)?;
    let c = ray_check_conditions(&n);
    let pair = n.unseparated_pair();
    let pair_text = pair.as_ref().map_or("none".to_string(), |(x, y)| format!("({x}, {y})"));
    r.line("carrier", n.carrier());
    r.line("conditions", format!("C1 {} C2 {} C3 {}", c.c1, c.c2, c.c3));
    r.line("unseparated pair", &pair_text);
    if closed {
        r.check("C1", "true", yes(c.c1));
        r.check("C2", "false", yes(c.c2));
    } else {
        r.check("C2", "true", yes(c.c2));
        r.check("C3", "false", yes(c.c3));
        r.check("1/4 is a member sup", "false", yes(n.is_endpoint(&FieldElement::frac(1, 4))));
    }
    r.check("T0", "false", yes(ray_t0_separating(&n)));
    r.check("unseparated pair", "(1/8, 1/4)", pair_text);
    Ok(r)
}

fn usual_order() -> Result<DemoReport> {
    let mut r = DemoReport::new("2.2", "open lower rays (−∞,x) over the whole line");
    let n = RayNest::new(q2(CarrierKind::Qsqrt2), RayShape::OpenUpper, EndpointSet::AllCarrier)?;
    let cert = ray_generated_order_is_carrier_order(&n);
    r.line("carrier", n.carrier());
    r.check("generated order is <", "true", yes(cert.holds));
    r.check("T0", "true", yes(ray_t0_separating(&n)));
    Ok(r)
}

fn closed_line() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.5", "closed lower rays (−∞,a] over the whole line");
    let n = RayNest::new(q2(CarrierKind::Qsqrt2), RayShape::ClosedUpper, EndpointSet::AllCarrier)?;
    let c = ray_check_conditions(&n);
    r.line("conditions", format!("C1 {} C2 {} C3 {}", c.c1, c.c2, c.c3));
    r.check("T0", "true", yes(ray_t0_separating(&n)));
    r.check("C1", "true", yes(c.c1));
    r.check("C2", "false", yes(c.c2));
    Ok(r)
}

fn rationals() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.6", "X = ℚ, L = {(−∞,r) ∩ ℚ : r real}");
    let endpoints = EndpointSet::DenseInterval {
        field: CarrierKind::Qsqrt2,
        lo: None,
        hi: None,
        lo_closed: false,
        hi_closed: false,
    };
    let n = RayNest::new(q2(CarrierKind::Q), RayShape::OpenUpper, endpoints)?;
    let c = ray_check_conditions(&n);
    let witness = c.c1_witness.as_ref().map_or("none".to_string(), ToString::to_string);
    r.line("carrier", n.carrier());
    r.line("endpoint without a sup", &witness);
    r.check("T0", "true", yes(ray_t0_separating(&n)));
    r.check("generated order is <", "true", yes(ray_generated_order_is_carrier_order(&n).holds));
    r.check("C1", "false", yes(c.c1));
    r.check("endpoint without a sup", "√2", witness);
    Ok(r)
}

fn naturals() -> Result<DemoReport> {
    let mut r = DemoReport::new("3.9", "L = {(−∞,n) : n ∈ ℕ}, R = {(n,∞) : n ∈ ℕ}");
    let endpoints =
        EndpointSet::ArithmeticProgression { start: FieldElement::zero(), step: FieldElement::int(1) };
    let n = RayNest::new(q2(CarrierKind::Qsqrt2), RayShape::OpenUpper, endpoints)?;
    let d = ray_dual_pair(&n);
    let pair = n.unseparated_pair();
    let pair_text = pair.as_ref().map_or("none".to_string(), |(x, y)| format!("({x}, {y})"));
    r.line("L unseparated pair", &pair_text);
    r.check("C2", "true", yes(d.conditions.c2));
    r.check("C2*", "true", yes(d.star_conditions.c2));
    r.check("L T0", "false", yes(d.t0));
    r.check("R T0", "false", yes(d.t0_star));
    Ok(r)
}

fn group_example(op: GroupOp) -> Result<DemoReport> {
    let add = op == GroupOp::Add;
    let (id, title) = if add {
        ("5.1", "(ℝ,+) with L = {(−∞,a)}")
    } else {
        ("5.2", "(ℝ−{0},×) with L = {(−∞,a)}")
    };
    let mut r = DemoReport::new(id, title);
    let n = RayNest::new(q2(CarrierKind::Qsqrt2), RayShape::OpenUpper, EndpointSet::AllCarrier)?;
    let c = ray_group_compat(op, &n)?;
    r.line("translation closed", c.translation_closed);
    r.check("T0", "true", yes(ray_t0_separating(&n)));
    r.check("compatible", yes(add), yes(c.compatible));
    if let Some(w) = &c.witness {
        let (ag, bg) = (apply_op(op, &w.a, &w.g), apply_op(op, &w.b, &w.g));
        r.line("witness", format!("a = {}, b = {}, g = {}", w.a, w.b, w.g));
        r.line("a ⊲ b", n.related(&w.a, &w.b)?);
        r.line("a×g ⊲ b×g", format!("{} ({ag} vs {bg})", n.related(&ag, &bg)?));
        r.line("(−∞,b)×g", format!("({}, ∞), an upper ray, not in L", bg));
    }
    if !add {
        let negative = c.witness.as_ref().is_some_and(|w| w.g < FieldElement::zero());
        r.check("negative multiplier witness", "true", yes(negative));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_passes() {
        for id in DEMO_IDS {
            let r = demo(id).unwrap();
            assert!(r.passed(), "{}", r.render());
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn aliases_and_unknown_ids() {
        assert_eq!(demo("2.x").unwrap().id, "2.2");
        assert_eq!(demo("3.3").unwrap().id, "3.4");
        assert!(matches!(demo("9.9"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn lower_topology_of_the_four_point_example_has_seven_opens() {
        let out = demo("3.8").unwrap().render();
        assert!(out.contains("T_l = {∅, {x1}, {x2}, {x1,x2}, {x1,x2,x3}, {x1,x2,x4}, {x1,x2,x3,x4}}"));
    }
}

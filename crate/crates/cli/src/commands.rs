use std::path::Path;

use anyhow::{bail, Context, Result};
use nestkit::analysis::{
    conditions, is_interlocking_alexandroff, is_interlocking_def, is_interlocking_lowersets, lots_check,
    make_dual_pair, pair_topologies, starred_conditions, Conditions,
};
use nestkit::bounds::{
    down_covers_x, escapes_down_set, escapes_up_set, every_cover_has_single_subcover, has_lower_bound,
    has_lower_bound_outside, has_upper_bound, has_upper_bound_outside, up_covers_x,
};
use nestkit::group::{
    inversion_continuity_check, multiplication_continuity_check, order_compatible, prop51_premise,
    translation_closed_members_trivial, FiniteGroup,
};
use nestkit::harness::{demo, run_suite, search, SearchSpec, SuiteConfig, SuiteReport, DEMO_IDS};
use nestkit::io::{load_instance, parse_subset, Loaded};
use nestkit::ray::{
    ray_dual_pair, ray_generated_order_is_carrier_order, ray_group_compat, ray_nest_from_json, GroupOp,
};
use nestkit::relation::{t0_separates, t1_separates, TransitivityMode};
use nestkit::{generated_order, Nest, Topology};
use serde_json::{json, Map, Value};

use crate::{Command, Format};

/// Run one command; `Ok(false)` means a violation was found.
pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Check { suite, max_n, seed, iters, json, format } => {
            let report = run_suite(&suite, &SuiteConfig { max_n, seed, iters })?;
            finish_report(&report, json.as_deref(), format)
        }
        Command::Search { property, max_n, mode, max_members, budget, seed, group, out, json, format } => {
            let spec = SearchSpec {
                target: property,
                max_n,
                max_members,
                mode: mode.into(),
                budget,
                seed,
                group,
                out_dir: out,
            };
            let report = search(&spec)?;
            finish_report(&report, json.as_deref(), format)
        }
        Command::Demo { example, format } => {
            let ids: Vec<&str> = if example == "all" { DEMO_IDS.to_vec() } else { vec![example.as_str()] };
            let reports = ids.iter().map(|id| demo(id)).collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Text => {
                    for r in &reports {
                        print!("{}", r.render());
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::Analyze { input, partner, format } => {
            let text = read(&input)?;
            let value: Value = serde_json::from_str(&text).context("input is not JSON")?;
            let out = if value.get("carrier").is_some() {
                analyze_ray(&text)?
            } else {
                let partner = partner.map(|p| read(&p).and_then(|t| Ok(load_instance(&t)?))).transpose()?;
                analyze_finite(&load_instance(&text)?, partner.as_ref())?
            };
            emit(&out, format)?;
            Ok(true)
        }
        Command::Bounds { input, subset, format } => {
            let loaded = load_instance(&read(&input)?)?;
            let nest = loaded.nest()?;
            let y = parse_subset(nest.universe(), &subset)?;
            emit(&bounds_report(&nest, y)?, format)?;
            Ok(true)
        }
        Command::GroupCheck { group, nest, right, prop, format } => {
            let g = load_group(&group)?;
            let left = load_instance(&read(&nest)?)?;
            let (out, ok) = group_check(&g, &left, right.as_deref(), &prop)?;
            emit(&out, format)?;
            Ok(ok)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn finish_report(report: &SuiteReport, json_path: Option<&Path>, format: Format) -> Result<bool> {
    if let Some(p) = json_path {
        report.write_json(p)?;
    }
    match format {
        Format::Text => print!("{}", report.render()),
        Format::Json => println!("{}", report.to_json()),
    }
    Ok(report.passed())
}

fn emit(v: &Value, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v)?),
        Format::Text => print!("{}", render_text(v, 0)),
    }
    Ok(())
}

/// Indented `key  value` lines; nested objects become blocks.
fn render_text(v: &Value, indent: usize) -> String {
    let Value::Object(map) = v else {
        return format!("{}{}\n", " ".repeat(indent), scalar(v));
    };
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in map {
        let pad = " ".repeat(indent);
        match val {
            Value::Object(_) => {
                out += &format!("{pad}{k}:\n");
                out += &render_text(val, indent + 2);
            }
            _ => {
                let gap = " ".repeat(width - k.chars().count());
                out += &format!("{pad}{k}{gap}  {}\n", scalar(val));
            }
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn condition_json(c: &Conditions) -> Value {
    json!({ "c1": c.c1, "c2": c.c2, "c3": c.c3 })
}

fn analyze_finite(loaded: &Loaded, partner: Option<&Loaded>) -> Result<Value> {
    let f = &loaded.family;
    let u = f.universe();
    let lt = generated_order(f);
    let mut out = Map::new();
    out.insert("universe".into(), json!(u.roster(u.full())));
    out.insert("family".into(), json!(f.roster()));
    out.insert("nest".into(), json!(f.is_nest()));
    out.insert("order".into(), json!(lt.roster(u)));
    out.insert("t0_separating".into(), json!(t0_separates(f)));
    out.insert("t1_separating".into(), json!(t1_separates(f)));
    out.insert("transitive".into(), json!(lt.is_transitive(TransitivityMode::Standard)));
    out.insert("topology".into(), json!(loaded.topology()?.roster()));
    if let Ok(nest) = loaded.nest() {
        let c = conditions(&nest);
        let sups: Map<String, Value> = nest
            .iter()
            .zip(&c.sups)
            .map(|(m, s)| (u.roster(m), json!(s.element.map_or("none".to_string(), |k| u.label(k)))))
            .collect();
        let mut cond = condition_json(&c);
        cond["sups"] = Value::Object(sups);
        out.insert("conditions".into(), cond);
        out.insert(
            "interlocking".into(),
            json!({
                "definition": is_interlocking_def(&nest),
                "alexandroff": is_interlocking_alexandroff(&nest),
                "lower_sets": is_interlocking_lowersets(&nest),
            }),
        );
        let partner_nest = match partner {
            Some(p) => p.nest()?,
            None => nest.complement(),
        };
        let pair = make_dual_pair(&nest, &partner_nest)?;
        let t = pair_topologies(&pair)?;
        let star = starred_conditions(&pair)?;
        let lots = lots_check(&pair)?;
        out.insert(
            "dual".into(),
            json!({
                "partner": partner_nest.roster(),
                "partner_source": if partner.is_some() { "input" } else { "complement" },
                "starred": condition_json(&star),
                "T_L": t.left.roster(),
                "T_R": t.right.roster(),
                "lower": t.lower.roster(),
                "upper": t.upper.roster(),
                "interval": t.interval.roster(),
                "T_L∪R": t.combined.roster(),
                "lots_hypotheses": lots.hypotheses(),
                "lots": lots.conclusion,
            }),
        );
    } else if partner.is_some() {
        bail!("a partner needs a nest input");
    }
    Ok(Value::Object(out))
}

fn analyze_ray(text: &str) -> Result<Value> {
    let n = ray_nest_from_json(text)?;
    let d = ray_dual_pair(&n);
    let cert = ray_generated_order_is_carrier_order(&n);
    let mut out = json!({
        "carrier": n.carrier().to_string(),
        "t0_separating": d.t0,
        "generated_order_is_carrier_order": cert.holds,
        "conditions": { "c1": d.conditions.c1, "c2": d.conditions.c2, "c3": d.conditions.c3 },
        "mirror": {
            "t0_separating": d.t0_star,
            "c1": d.star_conditions.c1,
            "c2": d.star_conditions.c2,
            "c3": d.star_conditions.c3,
        },
    });
    if let Some((x, y)) = cert.witness {
        out["unseparated_pair"] = json!(format!("({x}, {y})"));
    }
    if let Some(w) = &d.conditions.c1_witness {
        out["endpoint_without_sup"] = json!(w.to_string());
    }
    for (name, op) in [("add", GroupOp::Add), ("multiply", GroupOp::Multiply)] {
        if let Ok(c) = ray_group_compat(op, &n) {
            let mut v = json!({ "compatible": c.compatible, "translation_closed": c.translation_closed });
            if let Some(w) = c.witness {
                v["witness"] = json!(format!("a = {}, b = {}, g = {}", w.a, w.b, w.g));
            }
            out[name] = v;
        }
    }
    Ok(out)
}

fn bounds_report(nest: &Nest, y: nestkit::Subset) -> Result<Value> {
    let u = nest.universe();
    let down = down_covers_x(nest, y);
    let up = up_covers_x(nest, y);
    Ok(json!({
        "nest": nest.roster(),
        "subset": u.roster(y),
        "t0_separating": t0_separates(nest),
        "X = ↓Y": serde_json::to_value(&down)?,
        "X = ↑Y": serde_json::to_value(&up)?,
        "upper_bound": has_upper_bound(nest, y),
        "lower_bound": has_lower_bound(nest, y),
        "strict_upper_bound": has_upper_bound_outside(nest, y),
        "strict_lower_bound": has_lower_bound_outside(nest, y),
        "escapes_down_set": escapes_down_set(nest, y),
        "escapes_up_set": escapes_up_set(nest, y),
        "every_cover_has_single_subcover": every_cover_has_single_subcover(nest, y)?,
    }))
}

fn load_group(spec: &str) -> Result<FiniteGroup> {
    let path = Path::new(spec);
    if path.exists() {
        return Ok(FiniteGroup::from_json(&read(path)?)?);
    }
    Ok(FiniteGroup::builtin(spec)?)
}

fn group_check(g: &FiniteGroup, left: &Loaded, right: Option<&Path>, prop: &str) -> Result<(Value, bool)> {
    let l = &left.family;
    if l.n() != g.order() {
        bail!("family lives on {} points but the group has order {}", l.n(), g.order());
    }
    match prop {
        "5.1" => {
            let premise = prop51_premise(g, l);
            let rep = order_compatible(g, l);
            let mut out = json!({
                "group": g.name(),
                "family": l.roster(),
                "premise": premise,
                "compatible": rep.compatible,
                "t0_separating": rep.t0_separating,
            });
            if let Some(w) = rep.witness {
                out["witness"] = serde_json::to_value(w)?;
            }
            if let Ok(nest) = left.nest() {
                out["members_trivial"] = json!(translation_closed_members_trivial(g, &nest));
            }
            Ok((out, !premise || rep.compatible))
        }
        _ => {
            let Some(rp) = right else { bail!("--right is required for {prop}") };
            let r = load_instance(&read(rp)?)?.family;
            let check = if prop == "5.2" {
                inversion_continuity_check(g, l, &r)?
            } else {
                multiplication_continuity_check(g, l, &r)?
            };
            let t = Topology::from_subbase(&l.union(&r)?)?;
            let out = json!({
                "group": g.name(),
                "left": l.roster(),
                "right": r.roster(),
                "topology": t.roster(),
                "premise": check.premise,
                "conclusion": check.conclusion,
            });
            Ok((out, check.holds()))
        }
    }
}

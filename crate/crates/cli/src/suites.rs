use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use prolong_core::catalog::reference::{reference, Printed, Reference};
use prolong_core::catalog::{su3_assemble, Algebra, GellMannData, SystemSpec};
use prolong_core::exterior::{FormExpr, Gen};
use prolong_core::prolong::{
    bianchi_defect, closure_decompose, curvature, extend_sl2, gauge_transform, linear_closure, pfaffians,
    riccati_chart, subchart_curvature, subsystem_pfaffians, trace_closure, Basis, GaugeMatrix, IdealDecomposition,
    PfaffianSet, RiccatiChart, Sl2Extension, SubCurvature, SubsystemSet,
};
use rayon::prelude::*;

use crate::report::{CheckResult, Status};

pub const GROUPS: [&str; 8] =
    ["structure", "closure", "charts", "curvatures", "traces", "extensions", "subsystems", "gauge"];

/// Expand a `--checks` value. `traces` also selects `charts`, whose ratio and
/// closure entries the trace results are read against.
pub fn parse_groups(csv: &str) -> Result<BTreeSet<&'static str>, String> {
    let mut out = BTreeSet::new();
    for part in csv.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if part == "all" {
            out.extend(GROUPS);
            continue;
        }
        let g = GROUPS.iter().find(|g| **g == part).ok_or_else(|| {
            format!("unknown check group `{part}` (expected all or one of {})", GROUPS.join(", "))
        })?;
        out.insert(*g);
        if *g == "traces" {
            out.insert("charts");
        }
    }
    if out.is_empty() {
        return Err("no check groups selected".into());
    }
    Ok(out)
}

/// Everything a check may need, computed at most once.
pub struct Ctx {
    pub sys: SystemSpec,
    pub set: PfaffianSet,
    pub reference: Option<Reference>,
    charts: Vec<Result<RiccatiChart, String>>,
    curvatures: Vec<OnceLock<Result<SubCurvature, String>>>,
    traces: Vec<OnceLock<Result<IdealDecomposition, String>>>,
    subsystems: Vec<OnceLock<Result<SubsystemSet, String>>>,
    extension: OnceLock<Result<Sl2Extension, String>>,
}

impl Ctx {
    pub fn new(sys: SystemSpec) -> Self {
        let set = pfaffians(&sys);
        let charts: Vec<_> =
            (1..=sys.dim).into_par_iter().map(|p| riccati_chart(&set, p).map_err(|e| e.to_string())).collect();
        let n = charts.len();
        Ctx {
            reference: reference(sys.algebra),
            sys,
            set,
            charts,
            curvatures: (0..n).map(|_| OnceLock::new()).collect(),
            traces: (0..n).map(|_| OnceLock::new()).collect(),
            subsystems: (0..n).map(|_| OnceLock::new()).collect(),
            extension: OnceLock::new(),
        }
    }

    fn chart(&self, p: usize) -> Result<&RiccatiChart, String> {
        self.charts[p - 1].as_ref().map_err(Clone::clone)
    }

    fn curvature(&self, p: usize) -> Result<&SubCurvature, String> {
        self.curvatures[p - 1]
            .get_or_init(|| self.chart(p).and_then(|c| subchart_curvature(c).map_err(|e| e.to_string())))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn trace(&self, p: usize) -> Result<&IdealDecomposition, String> {
        self.traces[p - 1]
            .get_or_init(|| self.chart(p).and_then(|c| trace_closure(c).map_err(|e| e.to_string())))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn subsystem(&self, p: usize) -> Result<&SubsystemSet, String> {
        self.subsystems[p - 1]
            .get_or_init(|| self.chart(p).and_then(|c| subsystem_pfaffians(c).map_err(|e| e.to_string())))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn extension(&self) -> Result<&Sl2Extension, String> {
        self.extension
            .get_or_init(|| extend_sl2(&self.set).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn name(&self) -> &str {
        &self.sys.name
    }

    fn printed<'a>(&'a self, pick: impl Fn(&'a Reference) -> &'a [Printed], label: &str) -> Option<&'a Printed> {
        self.reference.as_ref().and_then(|r| pick(r).iter().find(|p| p.label == label))
    }
}

type Task = Box<dyn Fn(&Ctx) -> CheckResult + Send + Sync>;

fn task(f: impl Fn(&Ctx) -> CheckResult + Send + Sync + 'static) -> Task {
    Box::new(f)
}

/// Compare a certified computation with an optional printed form, after
/// rewriting both through `view`.
fn judge(
    ctx: &Ctx,
    id: String,
    computed: Result<FormExpr, String>,
    printed: Option<&Printed>,
    view: impl Fn(&FormExpr) -> FormExpr,
) -> CheckResult {
    let sys = ctx.name();
    let computed = match computed {
        Ok(c) => c,
        Err(e) => return CheckResult::new(sys, id, Status::Fail, String::new(), "identity").diff(e),
    };
    let Some(p) = printed else {
        return CheckResult::new(sys, id, Status::Pass, computed.to_string(), "identity");
    };
    let want = match p.form() {
        Ok(w) => w,
        Err(e) => {
            return CheckResult::new(sys, id, Status::Fail, computed.to_string(), "printed")
                .expected(p.text)
                .diff(format!("printed form does not parse: {e}"))
        }
    };
    let (c, w) = (view(&computed), view(&want));
    if c == w {
        CheckResult::new(sys, id, Status::Pass, computed.to_string(), "printed").expected(want.to_string())
    } else {
        CheckResult::new(sys, id, Status::Discrepancy, computed.to_string(), "printed")
            .expected(want.to_string())
            .diff(format!("computed - printed = {}", &c - &w))
    }
}

fn same(f: &FormExpr) -> FormExpr {
    f.clone()
}

fn certify(d: &IdealDecomposition) -> Result<FormExpr, String> {
    if d.is_member() {
        Ok(d.reassemble())
    } else {
        Err(format!("not in the ideal, remainder {}", d.remainder))
    }
}

fn boolean(ctx: &Ctx, id: String, ok: bool, computed: String, why: impl FnOnce() -> String) -> CheckResult {
    let r = CheckResult::new(ctx.name(), id, if ok { Status::Pass } else { Status::Fail }, computed, "identity");
    if ok {
        r
    } else {
        r.diff(why())
    }
}

fn structure_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    if ctx.sys.traceless {
        let id = format!("{s}/structure/traceless");
        out.push(task(move |c| match c.sys.connection.trace() {
            Ok(t) => boolean(c, id.clone(), t.is_zero(), t.to_string(), || "connection has nonzero trace".into()),
            Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
        }));
    }
    let id = format!("{s}/structure/curvature");
    out.push(task(move |c| match curvature(&c.sys.connection, &c.sys.table) {
        Ok(th) => {
            let ok = th == c.sys.theta_matrix;
            boolean(c, id.clone(), ok, th.to_string(), || format!("expected {}", c.sys.theta_matrix))
        }
        Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
    }));
    for w in ctx.sys.oneforms.clone() {
        let id = format!("{s}/structure/d{}", w.name);
        let label = format!("d{}", w.name);
        out.push(task(move |c| {
            let t = &c.sys.table;
            let computed = t.d_gen(&w).map_err(|e| e.to_string()).and_then(|dw| match t.d(&dw) {
                Ok(z) if z.is_zero() => Ok(dw),
                Ok(z) => Err(format!("d(d{}) = {z}", w.name)),
                Err(e) => Err(e.to_string()),
            });
            judge(c, id.clone(), computed, c.printed(|r| &r.structure, &label), same)
        }));
    }
    let id = format!("{s}/structure/d2");
    out.push(task(move |c| match c.sys.table.d_squared_failures() {
        Ok(f) => boolean(c, id.clone(), f.is_empty(), format!("{} entries", c.sys.table.gen_entries().count()), || {
            format!("d^2 != 0 for {}", f.join(", "))
        }),
        Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
    }));
    let id = format!("{s}/structure/bianchi");
    out.push(task(move |c| match bianchi_defect(&c.sys.connection, &c.sys.theta_matrix, &c.sys.table) {
        Ok(m) => boolean(c, id.clone(), m.is_zero(), m.to_string(), || "nonzero defect".into()),
        Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
    }));
    if ctx.sys.algebra == Algebra::Su3 {
        out.push(task(|c| {
            let g = GellMannData::standard();
            boolean(c, "su3/structure/f-antisymmetric".into(), g.is_antisymmetric(), "f".into(), || {
                "structure constants are not totally antisymmetric".into()
            })
        }));
        out.push(task(|c| {
            let bad = GellMannData::standard().commutator_failures();
            boolean(c, "su3/structure/commutators".into(), bad.is_empty(), "28 pairs".into(), || {
                format!("commutator fails for {bad:?}")
            })
        }));
        out.push(task(|c| {
            let ws: Vec<FormExpr> = c.sys.oneforms.iter().cloned().map(FormExpr::gen).collect();
            match su3_assemble(&GellMannData::standard(), &ws) {
                Ok(m) => boolean(c, "su3/structure/assemble".into(), m == c.sys.connection, m.to_string(), || {
                    format!("connection is {}", c.sys.connection)
                }),
                Err(e) => boolean(c, "su3/structure/assemble".into(), false, String::new(), || e.to_string()),
            }
        }));
        for l in 1..=8 {
            out.push(task(move |c| {
                let ws: Vec<FormExpr> = c.sys.oneforms.iter().cloned().map(FormExpr::gen).collect();
                let g = GellMannData::standard();
                let e = g.structure_equation(l, &ws, &FormExpr::gen(c.sys.thetas[l - 1].clone()));
                let id = format!("su3/structure/f-expansion/dw{l}");
                match c.sys.table.d_gen(&c.sys.oneforms[l - 1]) {
                    Ok(t) => boolean(c, id, t == e, e.to_string(), || format!("table has {t}")),
                    Err(err) => boolean(c, id, false, String::new(), || err.to_string()),
                }
            }));
        }
    }
}

fn closure_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    for i in 0..ctx.set.forms.len() {
        let label = ctx.set.forms[i].gen.name.to_string();
        let id = format!("{s}/closure/{label}");
        let l = label.clone();
        out.push(task(move |c| judge(c, id.clone(), Ok(c.set.forms[i].form.clone()), c.printed(|r| &r.pfaffians, &l), same)));
        let id = format!("{s}/closure/d{label}");
        let l = format!("d{label}");
        out.push(task(move |c| {
            let basis = Basis::new(c.set.forms.clone(), c.sys.thetas.clone());
            let computed = c
                .set
                .d(i)
                .and_then(|b| closure_decompose(&b, &basis))
                .map_err(|e| e.to_string())
                .and_then(|d| {
                    let f = certify(&d)?;
                    let want = basis.express(&linear_closure(&c.sys, &c.set, i));
                    if d.expressed == want {
                        Ok(f)
                    } else {
                        Err(format!("closure differs from -Theta y + Omega^alpha: {want}"))
                    }
                });
            judge(c, id.clone(), computed, c.printed(|r| &r.closures, &l), |f| basis.express(f))
        }));
    }
}

fn ratio_text(ctx: &Ctx, numer: usize, denom: usize) -> String {
    format!("{}/{}", ctx.sys.pseudos[numer - 1], ctx.sys.pseudos[denom - 1])
}

fn chart_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    for p in 1..=ctx.sys.dim {
        let chart = match ctx.chart(p) {
            Ok(c) => c,
            Err(e) => {
                let id = format!("{s}/charts/pivot{p}");
                out.push(task(move |c| boolean(c, id.clone(), false, String::new(), || e.clone())));
                continue;
            }
        };
        for (k, r) in chart.ratios.iter().enumerate() {
            let var = r.var.to_string();
            let id = format!("{s}/charts/ratio/{var}");
            out.push(task(move |c| {
                let r = &c.chart(p).expect("built").ratios[k];
                let computed = ratio_text(c, r.numer, r.denom);
                let printed = c.reference.as_ref().and_then(|rf| rf.ratios.iter().find(|x| x.var == var));
                match printed {
                    None => CheckResult::new(c.name(), id.clone(), Status::Pass, computed, "identity"),
                    Some(x) if (x.numer, x.denom) == (r.numer, r.denom) => {
                        CheckResult::new(c.name(), id.clone(), Status::Pass, computed.clone(), "printed").expected(computed)
                    }
                    Some(x) => CheckResult::new(c.name(), id.clone(), Status::Discrepancy, computed.clone(), "printed")
                        .expected(ratio_text(c, x.numer, x.denom))
                        .diff(format!("{var} is {computed} by the chart construction")),
                }
            }));
        }
        for (k, f) in chart.forms.iter().enumerate() {
            let label = f.gen.name.to_string();
            let id = format!("{s}/charts/{label}");
            let l = label.clone();
            out.push(task(move |c| {
                let ch = c.chart(p).expect("built");
                let computed = if ch.degree_bound() <= 2 {
                    Ok(ch.forms[k].form.clone())
                } else {
                    Err(format!("chart form of degree {} in the chart variables", ch.degree_bound()))
                };
                judge(c, id.clone(), computed, c.printed(|r| &r.charts, &l), same)
            }));
            let id = format!("{s}/charts/d{label}");
            let l = format!("d{label}");
            out.push(task(move |c| {
                let ch = c.chart(p).expect("built");
                let d = &ch.closures[k];
                let basis = ch.basis();
                if let Some(pr) = c.printed(|r| &r.chart_closures, &l) {
                    return judge(c, id.clone(), certify(d), Some(pr), |f| basis.express(f));
                }
                let computed = certify(d).map(|_| d.theta_part());
                judge(c, id.clone(), computed, c.printed(|r| &r.chart_thetas, &l), same)
            }));
        }
        let m = chart.connection.rows();
        for i in 0..m {
            for j in 0..m {
                let id = format!("{s}/charts/Omega{p}[{},{}]", i + 1, j + 1);
                out.push(task(move |c| {
                    let ch = c.chart(p).expect("built");
                    let computed = ch
                        .closures
                        .iter()
                        .try_for_each(|d| certify(d).map(|_| ()))
                        .map(|_| ch.connection.get(i, j).clone());
                    let printed = c.reference.as_ref().and_then(|r| r.sub_connections.get(p - 1)).map(|row| &row[i * m + j]);
                    judge(c, id.clone(), computed, printed.filter(|_| m == 2), same)
                }));
            }
        }
    }
}

fn curvature_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    for p in 1..=ctx.sys.dim {
        let Ok(chart) = ctx.chart(p) else { continue };
        let m = chart.connection.rows();
        for i in 0..m {
            for j in 0..m {
                let id = format!("{s}/curvatures/Theta{p}[{},{}]", i + 1, j + 1);
                out.push(task(move |c| {
                    let computed = c.curvature(p).and_then(|sc| certify(&sc.entries[i * m + j]));
                    let printed = c
                        .reference
                        .as_ref()
                        .and_then(|r| r.sub_curvatures.iter().find(|(q, _)| *q == p))
                        .map(|(_, e)| &e[i * m + j])
                        .filter(|_| m == 2);
                    let basis = c.chart(p).expect("built").basis();
                    judge(c, id.clone(), computed, printed, |f| basis.express(f))
                }));
            }
        }
    }
}

fn trace_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    for p in 1..=ctx.sys.dim {
        if ctx.chart(p).is_err() {
            continue;
        }
        let id = format!("{s}/traces/trace{p}");
        out.push(task(move |c| {
            judge(c, id.clone(), Ok(c.chart(p).expect("built").trace.clone()), None, same)
        }));
        let id = format!("{s}/traces/dtrace{p}");
        out.push(task(move |c| {
            let computed = c.trace(p).and_then(certify);
            let printed = c.reference.as_ref().and_then(|r| r.traces.get(p - 1));
            let basis = c.chart(p).expect("built").basis();
            judge(c, id.clone(), computed, printed, |f| basis.express(f))
        }));
    }
}

fn extension_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    if ctx.sys.dim != 2 {
        return;
    }
    let s = ctx.name().to_string();
    let get = |c: &Ctx, pick: fn(&prolong_core::catalog::reference::ExtensionReference) -> &Vec<Printed>, k: usize| {
        c.reference.as_ref().and_then(|r| r.extension.as_ref()).and_then(|e| pick(e).get(k).copied())
    };
    for k in 0..2 {
        let id = format!("{s}/extensions/sigma{}", k + 1);
        out.push(task(move |c| {
            let computed = c.extension().map(|e| e.sigmas[k].clone());
            judge(c, id.clone(), computed, get(c, |e| &e.sigmas, k).as_ref(), same)
        }));
        let id = format!("{s}/extensions/dsigma{}", k + 1);
        out.push(task(move |c| {
            let computed = c.extension().and_then(|e| certify(&e.dsigmas[k]));
            let basis = c.extension().map(|e| e.basis()).ok();
            judge(c, id.clone(), computed, get(c, |e| &e.dsigmas, k).as_ref(), |f| {
                basis.as_ref().map(|b| b.express(f)).unwrap_or_else(|| f.clone())
            })
        }));
    }
    for k in 0..4 {
        out.push(task(move |c| {
            let name = c.extension().map(|e| e.forms[k].gen.name.to_string()).unwrap_or_else(|_| format!("form{k}"));
            let id = format!("{}/extensions/{name}", c.name());
            let computed = c.extension().map(|e| e.forms[k].form.clone());
            judge(c, id, computed, get(c, |e| &e.forms, k).as_ref(), same)
        }));
        out.push(task(move |c| {
            let name = c.extension().map(|e| e.forms[k].gen.name.to_string()).unwrap_or_else(|_| format!("form{k}"));
            let id = format!("{}/extensions/d{name}", c.name());
            let computed = c.extension().and_then(|e| certify(&e.closures[k]));
            let basis = c.extension().map(|e| e.basis()).ok();
            judge(c, id, computed, get(c, |e| &e.closures, k).as_ref(), |f| {
                basis.as_ref().map(|b| b.express(f)).unwrap_or_else(|| f.clone())
            })
        }));
    }
}

fn subsystem_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    for p in 1..=ctx.sys.dim {
        let Ok(chart) = ctx.chart(p) else { continue };
        for j in 0..chart.connection.rows() {
            let id = format!("{s}/subsystems/at{p}_{}", j + 1);
            out.push(task(move |c| {
                let computed = c.subsystem(p).and_then(|ss| {
                    let f = certify(&ss.closures[j])?;
                    if ss.matches_shape()[j] {
                        Ok(f)
                    } else {
                        Err(format!("closure differs from Omega^alpha - Theta y: {}", ss.expected[j]))
                    }
                });
                judge(c, id.clone(), computed, None, same)
            }));
        }
    }
}

fn gauge_tasks(ctx: &Ctx, out: &mut Vec<Task>) {
    let s = ctx.name().to_string();
    let n = ctx.sys.dim;
    let id = format!("{s}/gauge/identity");
    out.push(task(move |c| match gauge_transform(&c.sys, &GaugeMatrix::identity(n)) {
        Ok(r) => {
            let ok = r.omega == c.sys.connection && r.covariant();
            boolean(c, id.clone(), ok, r.omega.to_string(), || "identity gauge changed the connection".into())
        }
        Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
    }));
    if n != 2 {
        return;
    }
    for (suffix, make) in [
        ("diagonal", (|| Ok(GaugeMatrix::diagonal("lam"))) as fn() -> prolong_core::Result<GaugeMatrix>),
        ("symbolic", GaugeMatrix::symbolic2),
    ] {
        let id = format!("{s}/gauge/{suffix}");
        out.push(task(move |c| match make().and_then(|g| gauge_transform(&c.sys, &g)) {
            Ok(r) => boolean(c, id.clone(), r.covariant(), r.omega.to_string(), || {
                r.difference().map(|d| format!("Theta' - A Theta A^-1 = {d}")).unwrap_or_else(|e| e.to_string())
            }),
            Err(e) => boolean(c, id.clone(), false, String::new(), || e.to_string()),
        }));
    }
}

/// Run the selected groups on one system. Checks run in parallel; the result
/// keeps construction order.
pub fn run_checks(sys: SystemSpec, groups: &BTreeSet<&str>) -> Vec<CheckResult> {
    let ctx = Ctx::new(sys);
    let mut tasks: Vec<Task> = Vec::new();
    let builders: [(&str, fn(&Ctx, &mut Vec<Task>)); 8] = [
        ("structure", structure_tasks),
        ("closure", closure_tasks),
        ("charts", chart_tasks),
        ("curvatures", curvature_tasks),
        ("traces", trace_tasks),
        ("extensions", extension_tasks),
        ("subsystems", subsystem_tasks),
        ("gauge", gauge_tasks),
    ];
    for (g, build) in builders {
        if groups.contains(g) {
            build(&ctx, &mut tasks);
        }
    }
    tasks
        .par_iter()
        .map(|t| {
            let start = Instant::now();
            let mut r = t(&ctx);
            r.millis = start.elapsed().as_secs_f64() * 1e3;
            r
        })
        .collect()
}

/// Pfaffian generator names of every chart, for rendering.
pub fn chart_gens(c: &RiccatiChart) -> Vec<Gen> {
    c.forms.iter().map(|f| f.gen.clone()).collect()
}

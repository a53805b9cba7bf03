use std::collections::BTreeMap;

use modreg_core::eis::{
    gamma1_index, identify_multiple, lvalue_weight2_at1, primes_up_to, sturm_bound, terms_for_tail,
};
use modreg_core::goncharov::{decompose, Decomposition, ModularComplex, Symbol2, DEFAULT_CAP};
use modreg_core::mahler::{
    elliptic_integral_gamma_e, lseries_for, mahler_measure, verify_identity, IdentityFormula,
    LaurentPoly,
};
use modreg_core::msym::{gamma15_terms, ManinSpace};
use modreg_core::units::{divisor_u1, enumerate_cusps, verify_parametrisation, U_PARAMS, V_PARAMS};
use modreg_core::FracSeries;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::data::TableRow;
use crate::report::{float, Session, Stage};
use crate::CliError;

/// `ũ` and `ṽ` through their printed terms, as `(exponent, coefficient)`.
const PRINTED_U: (&[(i64, i64)], i64) = (&[(0, -1), (1, -1), (4, 1), (5, 1), (7, -1)], 8);
const PRINTED_V: (&[(i64, i64)], i64) = (
    &[
        (-2, -1),
        (-1, -1),
        (0, -2),
        (1, -2),
        (2, -2),
        (3, -2),
        (4, -2),
    ],
    5,
);

/// Weight-2 newform identified with the Eisenstein combination.
const F15_LABEL: &str = "15a8";
const F15_MULTIPLE: i64 = -8;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `-1 - q + q^4 + O(q^8)` style rendering.
pub fn show_series(f: &FracSeries) -> String {
    let mut out = String::new();
    for (e, c) in f.terms() {
        let q = match (*e.numer(), *e.denom()) {
            (0, _) => String::new(),
            (1, 1) => "q".to_string(),
            (n, 1) => format!("q^{n}"),
            (n, d) => format!("q^({n}/{d})"),
        };
        let mag = c.abs();
        let body = match (q.is_empty(), mag.is_one()) {
            (true, _) => mag.to_string(),
            (false, true) => q,
            (false, false) => format!("{mag}*{q}"),
        };
        if out.is_empty() {
            out = if c.is_negative() {
                format!("-{body}")
            } else {
                body
            };
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    if let Some(p) = f.prec() {
        let p = if *p.denom() == 1 {
            p.numer().to_string()
        } else {
            format!("({p})")
        };
        out.push_str(&format!(" + O(q^{p})"));
    }
    out
}

fn printed_matches(f: &FracSeries, printed: (&[(i64, i64)], i64)) -> Result<(), String> {
    let (terms, prec) = printed;
    let want: BTreeMap<i64, i64> = terms.iter().copied().collect();
    let lo = want.keys().next().copied().unwrap_or(0).min(-4);
    for e in lo..prec {
        let have = f
            .coefficient(Rational64::from_integer(e))
            .unwrap_or_else(BigRational::zero);
        let w = rat(want.get(&e).copied().unwrap_or(0));
        if have != w {
            return Err(format!("coefficient of q^{e} is {have}, printed {w}"));
        }
    }
    if f.terms().any(|(e, _)| e < Rational64::from_integer(lo)) {
        return Err(format!("terms below q^{lo}"));
    }
    Ok(())
}

fn printed_text(printed: (&[(i64, i64)], i64)) -> String {
    let (terms, prec) = printed;
    let s = FracSeries::from_integer_coeffs(15, terms.iter().map(|(e, c)| (*e, rat(*c))), prec);
    show_series(&s)
}

pub fn verify_parametrisation_cmd(s: &mut Session, prec: i64) -> Result<(), CliError> {
    let rep = match verify_parametrisation(prec) {
        Ok(r) => r,
        Err(e) => {
            s.record(Stage::new("parametrisation").fail(e));
            return Ok(());
        }
    };
    s.record(
        Stage::new("parametrisation")
            .exact(
                "identity",
                format!("(1+u)^2(1+v)^2 - uv = O(q^{})", rep.zero_below),
            )
            .exact("u-tilde", show_series(&rep.u_tilde))
            .exact("v-tilde", show_series(&rep.v_tilde))
            .exact(
                "pole-bound",
                rep.pole_bound
                    .iter()
                    .map(|(k, p)| format!("{}:{p}", modreg_core::units::cusp_label(*k)))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
    );
    let u = printed_matches(&rep.u_tilde, PRINTED_U);
    let v = printed_matches(&rep.v_tilde, PRINTED_V);
    s.record(
        Stage::new("printed-terms")
            .paper("u-tilde", printed_text(PRINTED_U))
            .paper("v-tilde", printed_text(PRINTED_V))
            .check(u.is_ok(), || format!("u-tilde: {}", u.clone().unwrap_err()))
            .check(v.is_ok(), || format!("v-tilde: {}", v.clone().unwrap_err())),
    );
    Ok(())
}

fn expected_divisor(level: u32, unit: [i64; 4]) -> Option<BTreeMap<u32, i64>> {
    if level != 15 {
        return None;
    }
    if unit == U_PARAMS {
        Some(BTreeMap::from([(2, -2), (7, 2)]))
    } else if unit == V_PARAMS {
        Some(BTreeMap::from([(1, -2), (4, 2)]))
    } else {
        None
    }
}

fn unit_name(unit: [i64; 4]) -> String {
    format!("u1({},{},{},{})", unit[0], unit[1], unit[2], unit[3])
}

pub fn divisors_cmd(s: &mut Session, level: u32, unit: [i64; 4]) -> Result<(), CliError> {
    let name = format!("divisor {}", unit_name(unit));
    let div = match divisor_u1(level, unit) {
        Ok(d) => d,
        Err(e) => {
            s.record(Stage::new(name).fail(e));
            return Ok(());
        }
    };
    let degree = div.degree(&enumerate_cusps(level));
    s.record(
        Stage::new(name)
            .exact("level", level)
            .exact("divisor", &div)
            .exact("degree", degree)
            .check(degree == 0, || format!("degree {degree}")),
    );
    if let Some(want) = expected_divisor(level, unit) {
        let shown = modreg_core::UnitDivisor {
            level,
            orders: want.clone(),
        };
        s.record(
            Stage::new(format!("printed divisor {}", unit_name(unit)))
                .paper("divisor", &shown)
                .check(div.orders == want, || {
                    format!("computed {div}, printed {shown}")
                }),
        );
    }
    Ok(())
}

/// Sizes printed for small levels: `(|U2|, dim Q[U2]/R2)`.
fn printed_counts(level: u32) -> Option<(usize, usize)> {
    match level {
        7 => Some((6, 1)),
        11 => Some((60, 5)),
        13 => Some((126, 8)),
        _ => None,
    }
}

pub struct DecomposeRequest<'a> {
    pub target: &'a str,
    pub candidates: &'a [String],
    /// Where to write the replayable certificate text.
    pub emit: Option<&'a std::path::Path>,
}

pub fn complex_cmd(
    s: &mut Session,
    level: u32,
    request: Option<DecomposeRequest<'_>>,
) -> Result<(), CliError> {
    let cx = match ModularComplex::build(level, true) {
        Ok(c) => c,
        Err(e) => {
            s.record(Stage::new("complex").fail(e));
            return Ok(());
        }
    };
    s.record(
        Stage::new("complex")
            .exact("level", level)
            .exact("U2", cx.u2.len())
            .exact("relations", cx.relations.len())
            .exact("quotient-dim", cx.quotient_dim()),
    );
    if let Some((u2, dim)) = printed_counts(level) {
        s.record(
            Stage::new("printed counts")
                .paper("U2", u2)
                .paper("quotient-dim", dim)
                .check(cx.u2.len() == u2 && cx.quotient_dim() == dim, || {
                    format!("computed ({}, {})", cx.u2.len(), cx.quotient_dim())
                }),
        );
    }
    let Some(req) = request else {
        return Ok(());
    };
    let file = s.data.cocycles()?;
    let resolve = |name: &str| {
        file.get(name).and_then(|c| {
            if c.level != level {
                return Err(modreg_core::GoncharovError::LevelMismatch(c.level, level));
            }
            cx.symbol_from_terms(&c.terms)
        })
    };
    let target: Symbol2 = match resolve(req.target) {
        Ok(x) => x,
        Err(e) => {
            s.record(Stage::new("cocycle data").fail(e));
            return Ok(());
        }
    };
    let d2 = cx.d2(&target);
    let d2_zero = matches!(&d2, Ok(w) if w.is_zero());
    s.record(
        Stage::new(format!("cocycle condition {}", req.target))
            .exact("d2", if d2_zero { "0" } else { "nonzero" })
            .check(d2_zero, || match &d2 {
                Ok(_) => "d2 is nonzero".into(),
                Err(e) => e.to_string(),
            }),
    );
    let mut symbols = Vec::new();
    for name in req.candidates {
        match resolve(name) {
            Ok(x) => symbols.push(x),
            Err(e) => {
                s.record(Stage::new("cocycle data").fail(e));
                return Ok(());
            }
        }
    }
    let mut st = Stage::new("decomposition");
    match decompose(&cx, &target, &symbols, DEFAULT_CAP) {
        Ok(Decomposition::InSpan(cert)) => {
            for (name, l) in req.candidates.iter().zip(&cert.lambda) {
                st = st.exact(&format!("lambda[{name}]"), l);
            }
            let text = cert.to_text();
            st = st.exact(
                "certificate-sha256",
                hex::encode(Sha256::digest(text.as_bytes())),
            );
            let replay = cert.replay(&target, &symbols);
            st = st.check(replay.is_ok(), || replay.unwrap_err().to_string());
            if let Some(path) = req.emit {
                std::fs::write(path, &text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
        }
        Ok(Decomposition::NotInSpan { span_rank, dim }) => {
            st = st.fail(format!(
                "target not in the span (rank {span_rank} of {dim})"
            ));
        }
        Err(e) => st = st.fail(e),
    }
    s.record(st);
    Ok(())
}

pub fn homology_cmd(s: &mut Session, level: u32) -> Result<(), CliError> {
    let m = ManinSpace::new(level);
    let h1 = m.cuspidal_basis().len();
    let plus = m.plus_basis().len();
    s.record(
        Stage::new("homology")
            .exact("level", level)
            .exact("manin-symbols", m.symbols.len())
            .exact("cusps", m.cusps.len())
            .exact("dim-H1", h1)
            .exact("dim-H1-plus", plus),
    );
    if level != 15 {
        return Ok(());
    }
    s.record(
        Stage::new("printed dimensions")
            .paper("dim-H1", 2)
            .paper("dim-H1-plus", 1)
            .check(h1 == 2 && plus == 1, || format!("computed ({h1}, {plus})")),
    );
    let gamma = match m.from_matrices(&gamma15_terms()) {
        Ok(g) => g,
        Err(e) => {
            s.record(Stage::new("plus generator").fail(e));
            return Ok(());
        }
    };
    let printed = "2[(1 9; 2 19)] - [(0 -1; 1 11)] - [(0 -1; 1 4)] + 2[(0 -1; 1 2)]";
    let st = Stage::new("plus generator").paper("gamma15", printed);
    let st = match m.plus_generator() {
        Ok(g) => {
            let k = g.ratio_to(&gamma);
            let ok = matches!(&k, Some(k) if k.abs().is_one());
            st.exact(
                "generator/gamma15",
                k.map(|k| k.to_string()).unwrap_or("none".into()),
            )
            .check(ok, || "generator is not ±gamma15".into())
        }
        Err(e) => st.fail(e),
    };
    s.record(st);
    let want = BigRational::new((-1).into(), 16.into());
    let mut st = Stage::new("manin-drinfeld projection").paper("pi({0,oo})/gamma15", &want);
    for p in [2u64, 7] {
        match m.manin_drinfeld_project(&m.zero_infinity(), p) {
            Ok(v) => {
                let k = v.ratio_to(&gamma);
                let shown = k
                    .as_ref()
                    .map(|k| k.to_string())
                    .unwrap_or("not a multiple".into());
                st = st
                    .exact(&format!("ratio(p={p})"), &shown)
                    .check(k.as_ref() == Some(&want), || format!("p={p}: {shown}"));
            }
            Err(e) => st = st.fail(format!("p={p}: {e}")),
        }
    }
    s.record(st);
    Ok(())
}

pub fn identify_f_cmd(s: &mut Session, prec: i64, ap_bound: u64) -> Result<(), CliError> {
    let comb = s.data.eisenstein()?;
    let curves = s.data.curves()?;
    let Some(curve) = curves.get(F15_LABEL) else {
        s.record(Stage::new("curve data").fail(format!("no model for {F15_LABEL}")));
        return Ok(());
    };
    let bad: Vec<String> = comb
        .terms
        .iter()
        .filter(|t| !t.is_integral(comb.level))
        .map(|t| format!("G{:?}G{:?}", t.x, t.y))
        .collect();
    s.record(
        Stage::new("integrality")
            .exact("products", comb.terms.len())
            .check(bad.is_empty(), || {
                format!("non-integral exponents: {}", bad.join(", "))
            }),
    );
    let nmax = prec.max(1) as usize - 1;
    let (f_big, a) = match (comb.assemble(prec), curve.newform_coeffs(nmax)) {
        (Ok(f), Ok(a)) => (f, a),
        (Err(e), _) | (_, Err(e)) => {
            s.record(Stage::new("assembly").fail(e));
            return Ok(());
        }
    };
    let lhs = f_big
        .integer_coeffs(nmax + 1)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mismatch = (0..=nmax).find(|&n| lhs[n] != rat(F15_MULTIPLE * a[n]));
    s.record(
        Stage::new("assembly")
            .paper("multiple", F15_MULTIPLE)
            .exact("F", show_series(&f_big))
            .exact("agrees-through", format!("q^{nmax}"))
            .check(mismatch.is_none(), || {
                let n = mismatch.unwrap_or(0);
                format!("coefficient {n}: {} vs {}", lhs[n], F15_MULTIPLE * a[n])
            }),
    );
    let sturm = sturm_bound(2, gamma1_index(15));
    let reference: Vec<BigRational> = a.iter().map(|x| rat(*x)).collect();
    let st = Stage::new("sturm identification")
        .paper("sturm-bound", 16)
        .exact("sturm-bound", sturm)
        .check(sturm == 16, || format!("bound {sturm}"));
    let st = match identify_multiple(&f_big, &reference, sturm) {
        Ok(c) => st
            .exact("c", &c)
            .check(c == rat(F15_MULTIPLE), || format!("c = {c}")),
        Err(e) => st.fail(e),
    };
    s.record(st);
    s.record(hecke_stage(curve, ap_bound));
    Ok(())
}

fn hecke_stage(curve: &modreg_core::eis::CurveModel, bound: u64) -> Stage {
    let m = ManinSpace::new(curve.conductor as u32);
    let st = Stage::new("hecke eigenvalues").exact("bound", bound);
    let mut checked = 0;
    for p in primes_up_to(bound) {
        if curve.is_bad(p) {
            continue;
        }
        let (ev, ap) = match (m.cuspidal_eigenvalue(p), curve.ap(p)) {
            (Ok(ev), Ok(ap)) => (ev, ap),
            (Err(e), _) => return st.fail(format!("p={p}: {e}")),
            (_, Err(e)) => return st.fail(format!("p={p}: {e}")),
        };
        if ev != rat(ap) {
            return st.fail(format!("p={p}: T_p = {ev}, a_p = {ap}"));
        }
        checked += 1;
    }
    st.exact("primes-checked", checked)
}

/// Parses `s` and rejects values where neither `L(s)` nor `L'(s)` is reported.
fn lvalue_point(s: f64) -> Result<Option<i32>, CliError> {
    if s > 0.0 && s.is_finite() {
        Ok(None)
    } else if s <= 0.0 && s.fract() == 0.0 && s > -100.0 {
        Ok(Some(s as i32))
    } else {
        Err(CliError::Input(format!(
            "s = {s}: need s > 0 or a non-positive integer"
        )))
    }
}

pub fn lvalue_cmd(s: &mut Session, label: &str, point: f64) -> Result<(), CliError> {
    let edge = lvalue_point(point)?;
    let curves = s.data.curves()?;
    let ls = match lseries_for(label, &curves) {
        Ok(l) => l,
        Err(e) => {
            s.record(Stage::new("l-series").exact("label", label).fail(e));
            return Ok(());
        }
    };
    let eps = match ls.detect_sign() {
        Ok(e) => e,
        Err(e) => {
            s.record(Stage::new("l-series").exact("label", label).fail(e));
            return Ok(());
        }
    };
    let residual = ls.functional_equation_residual(eps);
    s.record(
        Stage::new("l-series")
            .exact("label", label)
            .exact("weight", ls.weight)
            .exact("conductor", ls.conductor)
            .exact("terms", ls.coeffs.len() - 1)
            .exact("sign", eps)
            .numeric("fe-residual", residual, residual),
    );
    let (name, value) = match edge {
        None => ("L(s)", ls.value(point)),
        Some(k) => ("L'(s)", ls.derivative_at_left_edge(k)),
    };
    let value = match value {
        Ok(v) => v,
        Err(e) => {
            s.record(Stage::new("value").fail(e));
            return Ok(());
        }
    };
    let err = (residual * value.abs()).max(f64::EPSILON * value.abs());
    s.say(format!(
        "{label}, {point}, {}, {}",
        float(value),
        float(err)
    ));
    s.record(
        Stage::new("value")
            .exact("s", point)
            .numeric(name, value, err),
    );
    if ls.weight == 2 && point == 1.0 && eps > 0.0 {
        if let Some(curve) = curves.get(label) {
            s.record(positivity_stage(curve, value));
        }
    }
    Ok(())
}

/// `L(f, 1)` from the rapidly convergent sum with its certified tail, and for
/// the level-15 curve the comparison with the elliptic period integral.
fn positivity_stage(curve: &modreg_core::eis::CurveModel, smoothed: f64) -> Stage {
    let terms = terms_for_tail(curve.conductor, 1e-15);
    let st = Stage::new("positivity");
    let coeffs = match curve.newform_coeffs(terms) {
        Ok(a) => a,
        Err(e) => return st.fail(e),
    };
    let lv = match lvalue_weight2_at1(&coeffs, curve.conductor, terms) {
        Ok(v) => v,
        Err(e) => return st.fail(e),
    };
    let mut st = st
        .numeric("L(1)", lv.value, lv.tail_bound)
        .check(lv.value - lv.tail_bound > 0.0, || {
            "not certified positive".into()
        })
        .check((lv.value - smoothed).abs() < 1e-10, || {
            format!("sums disagree: {} vs {}", lv.value, smoothed)
        });
    if curve.label == F15_LABEL {
        let period = elliptic_integral_gamma_e();
        let diff = (period.value - 16.0 * lv.value).abs();
        st = st
            .numeric("elliptic-integral", period.value, period.error_estimate)
            .numeric(
                "|integral - 16 L(1)|",
                diff,
                period.error_estimate + 16.0 * lv.tail_bound,
            )
            .check(diff < 1e-8, || format!("difference {diff:e}"));
    }
    st
}

pub struct IdentityRequest {
    pub label: String,
    pub r: Rational64,
    pub s: Rational64,
    pub tol: f64,
}

pub fn mahler_cmd(
    s: &mut Session,
    poly: &str,
    target: f64,
    identity: Option<IdentityRequest>,
) -> Result<(), CliError> {
    let p = LaurentPoly::parse(poly).map_err(|e| CliError::Input(e.to_string()))?;
    let Some(req) = identity else {
        let st = match mahler_measure(&p, target) {
            Ok(m) => Stage::new("mahler")
                .exact("polynomial", &p)
                .numeric("m(P)", m.value, m.error_estimate)
                .exact("evaluations", m.evaluations),
            Err(e) => Stage::new("mahler").exact("polynomial", &p).fail(e),
        };
        s.record(st);
        s.say(HEURISTIC_FOOTER);
        return Ok(());
    };
    let curves = s.data.curves()?;
    let row = TableRow {
        table: "cli".into(),
        polynomial: poly.into(),
        label: req.label,
        r: req.r,
        s: req.s,
        g: 1,
        source: "numerical".into(),
    };
    s.say(ROW_HEADER);
    let st = identity_stage(s, "", &row, &p, &curves, target, req.tol);
    s.record(st);
    s.say(HEURISTIC_FOOTER);
    Ok(())
}

const ROW_HEADER: &str = "polynomial | lhs | rhs | |Δ| | est_err";
const HEURISTIC_FOOTER: &str =
    "Error estimates are heuristic quadrature estimates; they are not certified bounds.";
const CONJECTURE_FOOTER: &str =
    "Rows marked `numerical` are numerical confirmations of conjectural identities, not proofs.";

fn formula_text(row: &TableRow) -> String {
    let l = format!("{}·L'({}, -1)", row.r, row.label);
    if row.s.is_zero() {
        l
    } else {
        format!("{l} + {}·ζ'(-2)", row.s)
    }
}

fn identity_stage(
    s: &mut Session,
    prefix: &str,
    row: &TableRow,
    p: &LaurentPoly,
    curves: &BTreeMap<String, modreg_core::eis::CurveModel>,
    target: f64,
    tol: f64,
) -> Stage {
    let st = Stage::new(format!("identity {}", row.polynomial))
        .paper("formula", formula_text(row))
        .paper(
            "status",
            if row.is_proved() {
                "proved"
            } else {
                "numerical confirmation"
            },
        );
    let formula = IdentityFormula {
        r: row.r,
        label: row.label.clone(),
        s: row.s,
    };
    match verify_identity(p, &formula, curves, target) {
        Ok(rep) => {
            let tag = if row.is_proved() {
                "proved"
            } else {
                "numerical"
            };
            s.say(format!(
                "{prefix}{} | {:.12} | {:.12} | {:.2e} | {:.1e} | {tag}",
                row.polynomial, rep.lhs.value, rep.rhs, rep.abs_diff, rep.lhs.error_estimate
            ));
            st.numeric("lhs", rep.lhs.value, rep.lhs.error_estimate)
                .numeric("rhs", rep.rhs, rep.rhs_error)
                .numeric(
                    "abs-diff",
                    rep.abs_diff,
                    rep.lhs.error_estimate + rep.rhs_error,
                )
                .exact("tolerance", float(tol))
                .check(rep.matches(tol), || {
                    format!("|Δ| = {:e} > {tol:e}", rep.abs_diff)
                })
                .check(rep.lhs.value >= 0.0, || "negative Mahler measure".into())
        }
        Err(e) => {
            s.say(format!("{prefix}{} | error: {e}", row.polynomial));
            st.fail(e)
        }
    }
}

/// `(quadrature target, acceptance tolerance)` per table.
fn table_tolerances(table: &str) -> (f64, f64) {
    match table {
        "main" => (1e-8, 1e-6),
        "f7" => (1e-6, 1e-4),
        _ => (1e-8, 1e-5),
    }
}

pub const TABLE_CHOICES: [&str; 6] = ["1", "2", "3", "main", "f7", "all"];

pub fn verify_tables_cmd(s: &mut Session, table: &str) -> Result<(), CliError> {
    if !TABLE_CHOICES.contains(&table) {
        return Err(CliError::Input(format!("unknown table `{table}`")));
    }
    let rows = s.data.tables()?;
    let curves = s.data.curves()?;
    let selected: Vec<&TableRow> = rows
        .iter()
        .filter(|r| table == "all" || r.table == table)
        .collect();
    if selected.is_empty() {
        s.record(Stage::new(format!("table {table}")).fail("no rows in the manifest"));
        return Ok(());
    }
    s.say(format!("table | {ROW_HEADER} | status"));
    for row in selected {
        let (target, tol) = table_tolerances(&row.table);
        let p = match LaurentPoly::parse(&row.polynomial) {
            Ok(p) => p,
            Err(e) => {
                s.store(Stage::new(format!("identity {}", row.polynomial)).fail(e));
                continue;
            }
        };
        let st = identity_stage(
            s,
            &format!("{} | ", row.table),
            row,
            &p,
            &curves,
            target,
            tol,
        );
        s.store(st);
    }
    s.say(HEURISTIC_FOOTER);
    s.say(CONJECTURE_FOOTER);
    Ok(())
}

/// Every stage of the level-15 argument in order.
pub fn pipeline_cmd(s: &mut Session, with_candidates: &[String]) -> Result<(), CliError> {
    verify_parametrisation_cmd(s, 200)?;
    divisors_cmd(s, 15, U_PARAMS)?;
    divisors_cmd(s, 15, V_PARAMS)?;
    complex_cmd(
        s,
        15,
        Some(DecomposeRequest {
            target: "xi15",
            candidates: with_candidates,
            emit: None,
        }),
    )?;
    homology_cmd(s, 15)?;
    identify_f_cmd(s, 21, 1000)?;
    lvalue_cmd(s, F15_LABEL, 1.0)?;
    verify_tables_cmd(s, "main")?;
    Ok(())
}

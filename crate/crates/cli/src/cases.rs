//! Named verification cases. Each one runs a battery of exact checks and
//! records every individual verdict.

use std::time::Instant;

use lamop_core::day::{covariant_compare, q_compare, swap, unit_left};
use lamop_core::envelopes::{check_chat_formula, check_monad_same, envelope, Variant};
use lamop_core::index_cats::factorial;
use lamop_core::kelly::{kelly, kelly_exact, kelly_level, mu3, s1, s2, unit_into_left, unit_into_right, KellyOpts, Mode};
use lamop_core::operads::{
    b_construction, ching_check_operad, check_operad, check_operad_map, comm_to_b_to_comm, random_mutation, OperadData,
};
use lamop_core::oplax::{
    check_normal_oplax, complete_mu, enumerate_wn, tuples_from, KellyLower, OplaxStructure, PointedSeq,
    Reduced, SmashLower, Truncated,
};
use lamop_core::rmodules::{check_rmodule, lift_to_lambda, RModData};
use lamop_core::sequences::{SeqMorphism, TruncSeq};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::expr::{evaluate, parse, ASS_NOTE};
use crate::CliError;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    pub cap: Option<usize>,
    pub block_cap: Option<usize>,
    pub seed: u64,
    pub n: Option<usize>,
}

impl Params {
    fn cap_or(&self, default: usize) -> usize {
        self.cap.unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub info: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Durations {
    pub total_ms: f64,
}

/// Machine-readable result of one case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub params: Params,
    pub outcome: Outcome,
    pub details: Vec<Check>,
    pub durations: Durations,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.details.iter().filter(|c| !c.pass)
    }
}

#[derive(Default)]
pub struct Checks(Vec<Check>);

impl Checks {
    pub fn check(&mut self, name: impl Into<String>, pass: bool, info: impl Serialize) -> bool {
        let info = serde_json::to_value(info).unwrap_or(Value::Null);
        self.0.push(Check { name: name.into(), pass, info });
        pass
    }

    fn ok(&mut self, name: impl Into<String>, pass: bool) -> bool {
        self.check(name, pass, Value::Null)
    }
}

type Runner = fn(&Params, &mut Checks) -> Result<(), CliError>;

pub struct CaseDef {
    pub name: &'static str,
    /// Acceptance criterion this case covers.
    pub criterion: usize,
    pub about: &'static str,
    run: Runner,
}

pub const CASES: &[CaseDef] = &[
    CaseDef { name: "day-unit", criterion: 1, about: "I0 ⊠ D -> D is bijective", run: day_unit },
    CaseDef { name: "day-swap", criterion: 1, about: "the symmetry of ⊠ is a bijective involution", run: day_swap },
    CaseDef { name: "q-iso", criterion: 1, about: "q: ⊠_Σ -> ⊠_Λ is a levelwise bijection", run: q_iso },
    CaseDef { name: "counts", criterion: 2, about: "closed-form sizes of products and envelopes", run: counts },
    CaseDef { name: "kelly-unit", criterion: 3, about: "unit maps for ⊙ over Λ and Σ are bijective", run: kelly_unit },
    CaseDef { name: "stabilization", criterion: 4, about: "Kelly products agree at block caps n+1 and n+2", run: stabilization },
    CaseDef { name: "mu3-comparisons", criterion: 5, about: "s1 and s2 are levelwise bijections", run: mu3_comparisons },
    CaseDef { name: "b-construction", criterion: 6, about: "B(C) is an operad with the expected sizes", run: b_cons },
    CaseDef { name: "envelope-monad", criterion: 7, about: "Ĉ ≅ C̄ ⊠ Comm and the two monads agree", run: envelope_monad },
    CaseDef { name: "pullback-roundtrip", criterion: 8, about: "lift and forget are mutually inverse", run: pullback },
    CaseDef { name: "wn-connected", criterion: 9, about: "sizes and connectivity of W_n", run: wn_connected },
    CaseDef { name: "oplax-completion", criterion: 10, about: "completed μ4 and its variants pass the checker", run: completion },
    CaseDef { name: "operad-monoid", criterion: 11, about: "monoid and operad checks agree, mutations fail", run: operad_monoid },
    CaseDef { name: "covariant-negative", criterion: 12, about: "the covariant comparison is not injective", run: covariant },
    CaseDef { name: "ass-discrepancy", criterion: 13, about: "Ass products by two routes, with footnote", run: ass_products },
];

pub fn find(name: &str) -> Option<&'static CaseDef> {
    CASES.iter().find(|c| c.name == name)
}

impl CaseDef {
    pub fn run(&self, params: &Params) -> CaseReport {
        let start = Instant::now();
        let mut checks = Checks::default();
        if let Err(e) = (self.run)(params, &mut checks) {
            checks.check("error", false, e.to_string());
        }
        let passed = !checks.0.is_empty() && checks.0.iter().all(|c| c.pass);
        CaseReport {
            case: self.name.to_string(),
            params: params.clone(),
            outcome: if passed { Outcome::Pass } else { Outcome::Fail },
            details: checks.0,
            durations: Durations { total_ms: start.elapsed().as_secs_f64() * 1e3 },
        }
    }
}

/// Run every case on its own thread; reports come back sorted by name.
pub fn run_all(params: &Params) -> Vec<CaseReport> {
    let mut out: Vec<CaseReport> = std::thread::scope(|s| {
        let handles: Vec<_> = CASES
            .iter()
            .map(|c| {
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(s, move || c.run(params))
                    .expect("spawn")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("case panicked")).collect()
    });
    out.sort_by(|a, b| a.case.cmp(&b.case));
    out
}

fn err(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn named(cap: usize) -> Vec<(&'static str, TruncSeq)> {
    vec![("I0", TruncSeq::i0(cap)), ("I1", TruncSeq::i1(cap)), ("Comm", TruncSeq::comm(cap)), ("Ass", TruncSeq::ass(cap))]
}

fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &x in &row {
            next.push(next.last().expect("nonempty") + x);
        }
        row = next;
    }
    row[0]
}

// ----- criterion 1 -----

fn day_unit(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    for (name, d) in named(p.cap_or(4)) {
        let (_, cmp) = unit_left(&d);
        c.check(format!("I0 ⊠ {name} -> {name}"), cmp.is_iso(), &cmp.levels);
    }
    Ok(())
}

fn day_swap(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let seqs = named(p.cap_or(4));
    for (a, d) in &seqs {
        for (b, e) in &seqs {
            let (there, back) = swap(d, e);
            let inv = match (&there.map, &back.map) {
                (Some(f), Some(g)) => f.then(g) == SeqMorphism::identity(&lamop_core::day::box2_explicit(d, e).seq),
                _ => false,
            };
            c.ok(format!("swap {a} ⊠ {b}"), there.is_iso() && back.is_iso() && inv);
        }
    }
    Ok(())
}

fn q_iso(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let seqs = named(p.cap_or(4));
    for (a, d) in &seqs {
        for (b, e) in &seqs {
            let (ex, _, cmp) = q_compare(d, e).map_err(err)?;
            c.check(format!("q on {a} ⊠ {b}"), cmp.is_iso(), json!({ "sizes": ex.seq.sizes() }));
        }
    }
    Ok(())
}

// ----- criterion 2 -----

fn counts(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(6);
    let cc = lamop_core::day::box2_explicit(&TruncSeq::comm(cap), &TruncSeq::comm(cap));
    let want: Vec<usize> = (0..=cap).map(|n| 1 << n).collect();
    c.check("|Comm ⊠ Comm(n)| = 2^n", cc.seq.sizes() == want, cc.seq.sizes());

    let top = cap.min(5);
    let r = kelly(&TruncSeq::comm(top + 3), &TruncSeq::comm(top), KellyOpts::new(Mode::Lambda)).map_err(err)?;
    let want: Vec<usize> = (0..=top).map(bell).collect();
    c.check("|Comm ⊙_Λ Comm(n)| = Bell(n)", r.seq.sizes() == want && r.is_stabilized(), r.seq.sizes());

    let m = cap.min(4);
    let tables = [
        ("I1", Variant::Bar, OperadData::i1(m)),
        ("Comm", Variant::Bar, OperadData::comm(m)),
        ("Comm", Variant::Hat, OperadData::comm(m)),
    ];
    for (name, v, op) in tables {
        let env = envelope(&op, v, m).map_err(err)?;
        let table = env.size_table();
        let ok = (0..=m).all(|n| {
            (0..=m).all(|k| {
                let want = match (name, v) {
                    ("I1", _) => if k >= n { factorial(k) / factorial(k - n) } else { 0 },
                    (_, Variant::Bar) => k.pow(n as u32),
                    _ => (k + 1).pow(n as u32),
                };
                table[n][k] == want
            })
        });
        c.check(format!("hom sizes of {name} {v:?}"), ok, &table);
    }
    Ok(())
}

// ----- criterion 3 -----

fn kelly_unit(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let i = TruncSeq::i1(cap);
    let is = TruncSeq::i1_sigma(cap);
    let exact_sigma = |d: &TruncSeq, e: &TruncSeq| {
        kelly(d, e, KellyOpts { mode: Mode::Sigma, cap: Some(cap), block_cap: Some(cap), check_stability: false })
    };
    for (name, d) in [("I1", TruncSeq::i1(cap)), ("Comm", TruncSeq::comm(cap)), ("Ass", TruncSeq::ass(cap))] {
        let l = unit_into_left(&d, &kelly_exact(&i, &d, cap).map_err(err)?);
        let r = unit_into_right(&d, &kelly_exact(&d, &i, cap).map_err(err)?);
        c.check(format!("{name} -> I1 ⊙_Λ {name}"), l.is_iso(), &l.levels);
        c.check(format!("{name} -> {name} ⊙_Λ I1"), r.is_iso(), &r.levels);
        let ds = d.forget_to_sigma();
        let l = unit_into_left(&ds, &exact_sigma(&is, &ds).map_err(err)?);
        let r = unit_into_right(&ds, &exact_sigma(&ds, &is).map_err(err)?);
        c.check(format!("{name} -> I1Σ ⊙_Σ {name}"), l.is_iso(), &l.levels);
        c.check(format!("{name} -> {name} ⊙_Σ I1Σ"), r.is_iso(), &r.levels);
    }
    Ok(())
}

// ----- criterion 4 -----

fn stabilization(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let top = p.cap_or(4);
    let firsts = [("I1", TruncSeq::i1(top + 2)), ("Comm", TruncSeq::comm(top + 2)), ("Ass", TruncSeq::ass(top + 2))];
    let seconds = [("I1", TruncSeq::i1(top)), ("Comm", TruncSeq::comm(top)), ("Ass", TruncSeq::ass(top))];
    for (a, d) in &firsts {
        for (b, e) in &seconds {
            let mut sizes = Vec::new();
            let mut ok = true;
            for n in 0..=top {
                let small = kelly_level(d, e, n, n + 1, Mode::Lambda).map_err(err)?;
                let big = kelly_level(d, e, n, n + 2, Mode::Lambda).map_err(err)?;
                let image: Vec<usize> = small.quotient.reps.iter().map(|&r| big.quotient.class_of[r]).collect();
                let mut seen = image.clone();
                seen.sort_unstable();
                seen.dedup();
                ok &= seen.len() == image.len() && image.len() == big.len();
                sizes.push(small.len());
            }
            c.check(format!("{a} ⊙_Λ {b}, levels ≤ {top}"), ok, sizes);
        }
    }
    Ok(())
}

// ----- criterion 5 -----

fn mu3_comparisons(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let pal = [("I1", TruncSeq::i1(cap)), ("Comm", TruncSeq::comm(cap)), ("Ass", TruncSeq::ass(2).extend_cap(cap))];
    for (a, x) in &pal {
        for (b, y) in &pal {
            for (d, z) in &pal {
                let m = mu3(x, y, z, cap, None, false).map_err(err)?;
                let xy = kelly_exact(x, y, cap).map_err(err)?;
                let left = kelly_exact(&xy.seq, z, cap).map_err(err)?;
                let yz = kelly_exact(y, z, cap).map_err(err)?;
                let right = kelly_exact(x, &yz.seq, cap).map_err(err)?;
                let ok1 = s1(&m, &xy, &left).is_iso();
                let ok2 = s2(&m, &yz, &right).is_iso();
                c.check(format!("s1, s2 on ({a},{b},{d})"), ok1 && ok2, json!({ "s1": ok1, "s2": ok2, "sizes": m.seq.sizes() }));
            }
        }
    }
    Ok(())
}

// ----- criterion 6 -----

fn b_cons(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    for (name, op) in [("Comm", OperadData::comm(cap)), ("Ass", OperadData::ass(cap.min(2)))] {
        let b = b_construction(&op).map_err(err)?;
        let rep = check_operad(&b.op);
        c.check(format!("B({name}) is an operad"), rep.is_ok(), rep.summary());
        let one = op.seq.size(0) + op.seq.size(1);
        c.check(format!("|B({name})(1)| = |{name}(0)| + |{name}(1)|"), b.op.seq.size(1) == one, b.op.seq.sizes());
        if name == "Comm" {
            let want: Vec<usize> = (0..=cap).map(|n| 1 << n).collect();
            c.check("|B(Comm)(n)| = 2^n", b.op.seq.sizes() == want, b.op.seq.sizes());
            let (f, g) = comm_to_b_to_comm(&b);
            c.ok("Comm -> B(Comm) preserves γ and the base point", check_operad_map(&op, &b.op, &f).preserves_structure());
            c.ok("B(Comm) -> Comm preserves γ and the base point", check_operad_map(&b.op, &op, &g).preserves_structure());
            c.ok("Comm -> B(Comm) -> Comm is the identity", f.then(&g) == SeqMorphism::identity(&op.seq));
        }
    }
    Ok(())
}

// ----- criterion 7 -----

fn envelope_monad(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let ops = [("I1", OperadData::i1(cap)), ("Comm", OperadData::comm(cap)), ("Ass", OperadData::ass(cap.min(2)))];
    for (name, op) in &ops {
        let r = check_chat_formula(op, cap).map_err(err)?;
        c.check(format!("Ĉ ≅ C̄ ⊠ Comm for {name}"), r.is_iso(), &r.per_target);
    }
    for (name, op) in &ops {
        for (yn, y) in [("I1", TruncSeq::i1(cap)), ("Comm", TruncSeq::comm(cap))] {
            let r = check_monad_same(op, &y, cap).map_err(err)?;
            c.check(
                format!("monad of C̄ on {yn} = {yn} ⊙ {name}"),
                r.is_ok(),
                json!({ "comparison": r.comparison, "multiplication": r.multiplication }),
            );
        }
    }
    Ok(())
}

// ----- criterion 8 -----

fn pullback(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let mut modules: Vec<(String, RModData)> = named(cap)
        .into_iter()
        .chain([("I2", TruncSeq::i_m(2, cap))])
        .map(|(n, s)| (format!("{n} over I1"), RModData::from_lambda_seq(&s)))
        .collect();
    modules.push(("Comm over Comm".into(), RModData::regular(&OperadData::comm(cap))));
    modules.push(("Ass over Ass".into(), RModData::regular(&OperadData::ass(cap))));
    let cb = lamop_core::day::box2_explicit(&TruncSeq::comm(cap), &TruncSeq::comm(cap)).seq;
    modules.push(("Comm ⊠ Comm over I1".into(), RModData::from_lambda_seq(&cb)));
    for (name, m) in modules {
        let lifted = lift_to_lambda(&m.forget()).map_err(err)?;
        c.ok(format!("lift ∘ forget = id on {name}"), lifted == m);
        c.ok(format!("forget ∘ lift = id on {name}"), lift_to_lambda(&m.forget()).map_err(err)?.forget() == m.forget());
        let rep = check_rmodule(&lifted);
        c.check(format!("lifted {name} satisfies the module laws and both face conditions"), rep.is_ok(), rep.summary());
    }
    Ok(())
}

// ----- criterion 9 -----

fn schroeder_minus_one(n: usize) -> usize {
    // little Schröder numbers: (k+1) s_{k+1} = 3(2k-1) s_k - (k-2) s_{k-1}
    let mut s = vec![0i64, 1, 1];
    for k in 2..n {
        let kk = k as i64;
        s.push((3 * (2 * kk - 1) * s[k] - (kk - 2) * s[k - 1]) / (kk + 1));
    }
    s[n] as usize - 1
}

fn wn_connected(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let ns: Vec<usize> = match p.n {
        Some(n) => vec![n],
        None => (3..=7).collect(),
    };
    for n in ns {
        let start = Instant::now();
        let w = enumerate_wn(n).map_err(|e| CliError::Usage(e.to_string()))?;
        let secs = start.elapsed().as_secs_f64();
        let want = schroeder_minus_one(n);
        c.check(format!("|W_{n}| = {want}"), w.len() == want, w.len());
        c.check(format!("W_{n} enumerated in under 5 s"), secs < 5.0, secs);
        let comps = w.components();
        c.check(format!("W_{n} connected iff n ≥ 4"), (comps == 1) == (n >= 4), json!({ "components": comps }));
    }
    Ok(())
}

// ----- criterion 10 -----

fn completion(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let k = KellyLower::new(cap);
    let pal = vec![k.obj(&TruncSeq::i1(cap)), k.obj(&TruncSeq::comm(cap)), k.obj(&TruncSeq::ass(2))];
    let s = complete_mu(k, 4, &pal).map_err(err)?;
    let tuples = tuples_from(&pal, 4);
    let mut all_iso = true;
    for xs in &tuples {
        let (_, legs) = s.diagram(xs).map_err(err)?;
        all_iso &= legs.iter().all(SeqMorphism::is_iso);
    }
    c.check("every limit projection of μ4 is bijective", all_iso, json!({ "tuples": tuples.len() }));
    let battery: Vec<_> = (0..=4).flat_map(|n| tuples_from(&pal, n)).collect();
    let rep = check_normal_oplax(&s, 4, &battery);
    c.check("completed structure is normal oplax through n = 4", rep.is_ok(), json!({ "checked": rep.checked, "failures": rep.failures.len() }));

    let pcap = cap.min(2);
    let pp = vec![
        std::rc::Rc::new(PointedSeq::plus(&TruncSeq::i1(pcap))),
        std::rc::Rc::new(PointedSeq::plus(&TruncSeq::comm(pcap))),
    ];
    let pb: Vec<_> = (0..=4).flat_map(|n| tuples_from(&pp, n)).collect();
    let red = Reduced::new(complete_mu(SmashLower::new(pcap), 4, &pp).map_err(err)?).map_err(err)?;
    let rep = check_normal_oplax(&red, 4, &pb);
    c.check("reduced variant", rep.is_ok(), json!({ "checked": rep.checked }));
    for t in [2, 3] {
        let tr = Truncated::new(Reduced::new(complete_mu(SmashLower::new(pcap), 4, &pp).map_err(err)?).map_err(err)?, t)
            .map_err(err)?;
        let rep = check_normal_oplax(&tr, 4, &pb);
        let top = tr.mu(&vec![pp[1].clone(); 4]).map_err(err)?;
        c.check(format!("{t}-truncated variant"), rep.is_ok(), json!({ "checked": rep.checked, "mu4_sizes": top.seq.sizes() }));
    }
    Ok(())
}

// ----- criterion 11 -----

fn operad_monoid(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let bc = b_construction(&OperadData::comm(cap)).map_err(err)?.op;
    let ops = [("Comm", OperadData::comm(cap)), ("Ass", OperadData::ass(cap)), ("B(Comm)", bc)];
    for (name, op) in &ops {
        let a = check_operad(op).is_ok();
        let b = ching_check_operad(op).is_ok();
        c.check(format!("{name}: both checks pass"), a && b, json!({ "operad": a, "monoid": b }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut done = 0;
    while done < 24 {
        let (name, op) = &ops[1 + done % 2];
        let (bad, m) = random_mutation(op, &mut rng).ok_or_else(|| err("no mutable entry"))?;
        let a = check_operad(&bad).is_ok();
        let b = ching_check_operad(&bad).is_ok();
        c.check(
            format!("{name} with γ{:?}[{}] = {} (was {}): both checks fail", m.profile, m.index, m.new, m.old),
            !a && !b,
            json!({ "operad": a, "monoid": b }),
        );
        done += 1;
    }
    Ok(())
}

// ----- criterion 12 -----

fn covariant(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let n = p.n.unwrap_or(3);
    let r = covariant_compare(&[0, 0, 1, 1], &[1, 1, 1, 1], n);
    c.check(format!("covariant comparison at level {n} is not an isomorphism"), !r.injective, &r);
    if n == 3 {
        c.check(
            "glued terms: one copy of C(3)×D(0), three of C(2)×D(0)",
            r.copies.contains(&(3, 0, 1)) && r.copies.contains(&(2, 0, 3)),
            &r.copies,
        );
    }
    Ok(())
}

// ----- criterion 13 -----

fn ass_products(p: &Params, c: &mut Checks) -> Result<(), CliError> {
    let cap = p.cap_or(3);
    let b = evaluate(&parse("box(Ass,Ass)")?, cap, p.block_cap)?;
    let want: Vec<usize> = (0..=cap).map(|n| factorial(n + 1)).collect();
    c.check("box(Ass,Ass) has sizes (n+1)!", b.sizes == want, &b.sizes);
    c.ok("box(Ass,Ass): explicit and coend routes agree", b.routes.as_ref().is_some_and(|r| r.agree));
    c.ok("box(Ass,Ass) carries the footnote", b.notes.iter().any(|n| n == ASS_NOTE));
    let k = evaluate(&parse("kelly_lambda(Ass,Ass)")?, cap, p.block_cap)?;
    c.ok("kelly_lambda(Ass,Ass): generator and coend routes agree", k.routes.as_ref().is_some_and(|r| r.agree));
    c.check("kelly_lambda(Ass,Ass) carries the footnote and flags", k.notes.iter().any(|n| n == ASS_NOTE), json!({
        "sizes": k.sizes,
        "stabilized": k.stabilized,
    }));
    Ok(())
}

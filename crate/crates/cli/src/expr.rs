//! Product expressions over the named sequences, e.g. `box(Comm,kelly_lambda(Ass,I1))`.

use std::fmt;

use lamop_core::day::{box2_coend, box2_explicit, boxn};
use lamop_core::kelly::{canonical, kelly, kelly_level_coend, mu3, KellyOpts, Mode};
use lamop_core::sequences::TruncSeq;
use serde::Serialize;

use crate::CliError;

/// Largest cap accepted for any operand. Factorial growth of `Ass` makes
/// anything beyond this impractical.
pub const MAX_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    I0,
    I1,
    Comm,
    Ass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Box,
    KellySigma,
    KellyLambda,
    Mu3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Seq(Named),
    Apply(Op, Vec<Expr>),
}

impl Named {
    fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i0" => Some(Named::I0),
            "i1" => Some(Named::I1),
            "comm" => Some(Named::Comm),
            "ass" => Some(Named::Ass),
            _ => None,
        }
    }

    pub fn build(self, cap: usize) -> TruncSeq {
        match self {
            Named::I0 => TruncSeq::i0(cap),
            Named::I1 => TruncSeq::i1(cap),
            Named::Comm => TruncSeq::comm(cap),
            Named::Ass => TruncSeq::ass(cap),
        }
    }
}

impl Op {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "box" => Some(Op::Box),
            "kelly_sigma" => Some(Op::KellySigma),
            "kelly_lambda" => Some(Op::KellyLambda),
            "mu3" => Some(Op::Mu3),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Op::Box => "box",
            Op::KellySigma => "kelly_sigma",
            Op::KellyLambda => "kelly_lambda",
            Op::Mu3 => "mu3",
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Seq(n) => write!(f, "{n:?}"),
            Expr::Apply(op, args) => {
                write!(f, "{}(", op.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<&str, CliError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let at = self.pos;
        let name = self.ident()?;
        if let Some(n) = Named::parse(name) {
            return Ok(Expr::Seq(n));
        }
        let op = Op::parse(name).ok_or_else(|| CliError::Parse { pos: at, msg: format!("unknown name `{name}`") })?;
        if !self.eat('(') {
            return Err(self.err(format!("`{}` needs arguments", op.name())));
        }
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        if !self.eat(')') {
            return Err(self.err("expected `,` or `)`"));
        }
        let ok = match op {
            Op::Box => !args.is_empty(),
            Op::KellySigma | Op::KellyLambda => args.len() == 2,
            Op::Mu3 => args.len() == 3,
        };
        if !ok {
            return Err(CliError::Parse { pos: at, msg: format!("`{}` takes {} arguments", op.name(), arity_hint(op)) });
        }
        Ok(Expr::Apply(op, args))
    }
}

fn arity_hint(op: Op) -> &'static str {
    match op {
        Op::Box => "one or more",
        Op::KellySigma | Op::KellyLambda => "two",
        Op::Mu3 => "three",
    }
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Agreement of two independent computations of the outermost product.
#[derive(Clone, Debug, Serialize)]
pub struct Routes {
    pub first: &'static str,
    pub second: &'static str,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Computed {
    pub expr: String,
    pub cap: usize,
    pub block_cap: Option<usize>,
    pub sizes: Vec<usize>,
    /// Per level: the value did not change when the block cap was raised.
    pub stabilized: Vec<bool>,
    pub routes: Option<Routes>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub seq: TruncSeq,
}

pub const ASS_NOTE: &str = "open question: no closed form is claimed for products with Ass as a factor; \
     the sizes above are computed directly at this cap";

struct Value {
    seq: TruncSeq,
    stable: Vec<bool>,
}

fn prefix_and(flags: &[bool], n: usize) -> bool {
    flags.iter().take(n + 1).all(|&b| b)
}

fn involves_ass_product(e: &Expr) -> bool {
    match e {
        Expr::Seq(_) => false,
        Expr::Apply(_, args) => args.iter().any(|a| matches!(a, Expr::Seq(Named::Ass)) || involves_ass_product(a)),
    }
}

/// Evaluate `e` up to level `cap`. `block_cap` is `K` for Kelly products and
/// `μ3` (default `cap + 2`); first factors are built up to `K + 1` so that the
/// stability check against `K + 1` is not vacuous.
pub fn evaluate(e: &Expr, cap: usize, block_cap: Option<usize>) -> Result<Computed, CliError> {
    if cap > MAX_CAP {
        return Err(CliError::CapExceeded { cap, max: MAX_CAP });
    }
    let kk = block_cap.unwrap_or(cap + 2);
    if kk + 1 > MAX_CAP + 2 {
        return Err(CliError::CapExceeded { cap: kk, max: MAX_CAP + 1 });
    }
    let v = eval(e, cap, block_cap)?;
    let routes = match e {
        Expr::Apply(Op::Box, args) if args.len() == 2 => {
            let d = eval(&args[0], cap, block_cap)?.seq;
            let f = eval(&args[1], cap, block_cap)?.seq;
            let co = box2_coend(&d, &f).map_err(|err| CliError::Compute(err.to_string()))?;
            Some(Routes { first: "explicit", second: "coend", agree: box2_explicit(&d, &f).seq == co.seq })
        }
        Expr::Apply(op @ (Op::KellySigma | Op::KellyLambda), args) => {
            let mode = if *op == Op::KellyLambda { Mode::Lambda } else { Mode::Sigma };
            let d = eval(&args[0], kk + 1, block_cap)?.seq;
            let f = eval(&args[1], cap, block_cap)?.seq;
            let mut agree = true;
            for n in 0..=cap {
                let gens = lamop_core::kelly::kelly_level(&d, &f, n, kk, mode).map_err(compute)?;
                let full = kelly_level_coend(&d, &f, n, kk, mode).map_err(compute)?;
                agree &= canonical(&gens.quotient.class_of) == full;
            }
            Some(Routes { first: "generators", second: "coend", agree })
        }
        _ => None,
    };
    let mut notes = Vec::new();
    if involves_ass_product(e) {
        notes.push(ASS_NOTE.to_string());
    }
    let uses_k = matches!(e, Expr::Apply(Op::KellySigma | Op::KellyLambda | Op::Mu3, _));
    Ok(Computed {
        expr: e.to_string(),
        cap,
        block_cap: uses_k.then_some(kk),
        sizes: v.seq.sizes(),
        stabilized: v.stable,
        routes,
        notes,
        seq: v.seq,
    })
}

fn compute(e: impl fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn eval(e: &Expr, cap: usize, block_cap: Option<usize>) -> Result<Value, CliError> {
    let kk = block_cap.unwrap_or(cap + 2);
    match e {
        Expr::Seq(n) => Ok(Value { seq: n.build(cap), stable: vec![true; cap + 1] }),
        Expr::Apply(Op::Box, args) => {
            let vs = args.iter().map(|a| eval(a, cap, block_cap)).collect::<Result<Vec<_>, _>>()?;
            let seqs: Vec<&TruncSeq> = vs.iter().map(|v| &v.seq).collect();
            let seq = if seqs.len() == 2 { box2_explicit(seqs[0], seqs[1]).seq } else { boxn(&seqs, cap).seq };
            let stable = (0..=cap).map(|n| vs.iter().all(|v| prefix_and(&v.stable, n))).collect();
            Ok(Value { seq, stable })
        }
        Expr::Apply(op @ (Op::KellySigma | Op::KellyLambda), args) => {
            let mode = if *op == Op::KellyLambda { Mode::Lambda } else { Mode::Sigma };
            let d = eval(&args[0], kk + 1, block_cap)?;
            let f = eval(&args[1], cap, block_cap)?;
            let opts = KellyOpts { cap: Some(cap), block_cap: Some(kk), ..KellyOpts::new(mode) };
            let r = kelly(&d.seq, &f.seq, opts).map_err(compute)?;
            let own = r.stabilized.clone().unwrap_or_else(|| vec![false; cap + 1]);
            let d_ok = d.stable.iter().all(|&b| b);
            let stable = (0..=cap).map(|n| own[n] && d_ok && prefix_and(&f.stable, n)).collect();
            Ok(Value { seq: r.seq, stable })
        }
        Expr::Apply(Op::Mu3, args) => {
            let d1 = eval(&args[0], kk + 1, block_cap)?;
            let d2 = eval(&args[1], kk + 1, block_cap)?;
            let d3 = eval(&args[2], cap, block_cap)?;
            let r = mu3(&d1.seq, &d2.seq, &d3.seq, cap, Some((kk, kk)), true).map_err(compute)?;
            let own = r.stabilized.unwrap_or(false);
            let upper = own && d1.stable.iter().chain(&d2.stable).all(|&b| b);
            let stable = (0..=cap).map(|n| upper && prefix_and(&d3.stable, n)).collect();
            Ok(Value { seq: r.seq, stable })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested() {
        let e = parse(" box( Comm , kelly_lambda(Ass,I1))").unwrap();
        assert_eq!(e.to_string(), "box(Comm,kelly_lambda(Ass,I1))");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("box(Comm"), Err(CliError::Parse { .. })));
        assert!(matches!(parse("mu3(Comm,Comm)"), Err(CliError::Parse { .. })));
        assert!(matches!(parse("Lie"), Err(CliError::Parse { pos: 0, .. })));
        assert!(matches!(parse("Comm Comm"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn small_products() {
        let r = evaluate(&parse("box(Comm,Comm)").unwrap(), 4, None).unwrap();
        assert_eq!(r.sizes, vec![1, 2, 4, 8, 16]);
        assert!(r.routes.unwrap().agree);
        assert!(r.notes.is_empty());
        let r = evaluate(&parse("kelly_lambda(Comm,Comm)").unwrap(), 4, None).unwrap();
        assert_eq!(r.sizes, vec![1, 1, 2, 5, 15]);
        assert!(r.stabilized.iter().all(|&b| b));
        let r = evaluate(&parse("kelly_sigma(Ass,Ass)").unwrap(), 1, Some(2)).unwrap();
        assert!(!r.stabilized[1]);
        assert!(matches!(evaluate(&parse("I1").unwrap(), 99, None), Err(CliError::CapExceeded { .. })));
    }
}

use std::fmt;

use num_bigint::BigInt;

use crate::mp::CharId;
use crate::symbolic::ConstGenerator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

/// Built-in functions of the expression language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Zeta,
    Dz,
    Cs,
    W,
    L,
    HsumOdd,
    HsumHalf,
    Hrat,
    B,
    E,
    Binom,
    Hyp2f1sp,
    Fact,
    Abs,
    Floor,
}

impl Func {
    pub const ALL: [Func; 15] = [
        Func::Zeta,
        Func::Dz,
        Func::Cs,
        Func::W,
        Func::L,
        Func::HsumOdd,
        Func::HsumHalf,
        Func::Hrat,
        Func::B,
        Func::E,
        Func::Binom,
        Func::Hyp2f1sp,
        Func::Fact,
        Func::Abs,
        Func::Floor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Zeta => "zeta",
            Func::Dz => "dz",
            Func::Cs => "cs",
            Func::W => "W",
            Func::L => "L",
            Func::HsumOdd => "hsum_odd",
            Func::HsumHalf => "hsum_half",
            Func::Hrat => "Hrat",
            Func::B => "B",
            Func::E => "E",
            Func::Binom => "binom",
            Func::Hyp2f1sp => "hyp2f1sp",
            Func::Fact => "fact",
            Func::Abs => "abs",
            Func::Floor => "floor",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == s)
    }

    /// Number of character arguments that precede the numeric ones.
    pub fn char_arity(self) -> usize {
        match self {
            Func::Cs => 2,
            Func::L => 1,
            _ => 0,
        }
    }

    /// Allowed numeric argument counts.
    pub fn arity(self) -> &'static [usize] {
        match self {
            Func::Dz | Func::Cs | Func::Binom => &[2],
            Func::W => &[3],
            Func::Hrat => &[1, 2],
            _ => &[1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Const(ConstGenerator),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// `sum(var=lo..hi, body)`, both bounds inclusive.
    Sum {
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
    Call {
        func: Func,
        chars: Vec<CharId>,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(func: Func, args: Vec<Expr>) -> Expr {
        Expr::Call { func, chars: Vec::new(), args }
    }

    pub fn sum(var: &str, lo: Expr, hi: Expr, body: Expr) -> Expr {
        Expr::Sum { var: var.to_string(), lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) }
    }

    /// Static node count.
    pub fn size(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::Var(_) | Expr::Const(_) => 1,
            Expr::Neg(a) => 1 + a.size(),
            Expr::Bin(_, a, b) => 1 + a.size() + b.size(),
            Expr::Sum { lo, hi, body, .. } => 1 + lo.size() + hi.size() + body.size(),
            Expr::Call { args, .. } => 1 + args.iter().map(Expr::size).sum::<usize>(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.prec(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Const(g) => write!(f, "{g}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, 3)
            }
            Expr::Bin(op, a, b) => {
                let p = op.prec();
                if *op == BinOp::Pow {
                    a.write_child(f, p + 1)?;
                    f.write_str(op.symbol())?;
                    b.write_child(f, 3)
                } else {
                    a.write_child(f, p)?;
                    f.write_str(op.symbol())?;
                    b.write_child(f, p + 1)
                }
            }
            Expr::Sum { var, lo, hi, body } => write!(f, "sum({var}={lo}..{hi}, {body})"),
            Expr::Call { func, chars, args } => {
                write!(f, "{}(", func.name())?;
                for (i, c) in chars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                if !chars.is_empty() {
                    f.write_str(if *func == Func::Cs { ";" } else { "," })?;
                }
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A parameter with its domain `lo <= var [<= hi]`, optionally restricted
/// by parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub lo: i64,
    pub hi: Option<i64>,
    pub parity: Option<Parity>,
}

impl Param {
    pub fn admits(&self, v: i64) -> bool {
        v >= self.lo
            && self.hi.map_or(true, |h| v <= h)
            && match self.parity {
                None => true,
                Some(Parity::Even) => v % 2 == 0,
                Some(Parity::Odd) => v % 2 != 0,
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub id: String,
    pub title: Option<String>,
    /// Marked `expect: report`: evaluated and reported, never a suite failure.
    pub expect_report: bool,
    pub params: Vec<Param>,
    /// Each pair must be equal.
    pub equations: Vec<(Expr, Expr)>,
    pub line: usize,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "identity {}", self.id)?;
        if let Some(t) = &self.title {
            write!(f, " \"{t}\"")?;
        }
        if self.expect_report {
            f.write_str(" expect: report")?;
        }
        f.write_str(" :")?;
        if !self.params.is_empty() {
            f.write_str(" forall ")?;
            let mut parts = Vec::new();
            for p in &self.params {
                parts.push(format!("{}>={}", p.name, p.lo));
                if let Some(h) = p.hi {
                    parts.push(format!("{}<={}", p.name, h));
                }
                match p.parity {
                    Some(Parity::Even) => parts.push(format!("{} even", p.name)),
                    Some(Parity::Odd) => parts.push(format!("{} odd", p.name)),
                    None => {}
                }
            }
            write!(f, "{} :", parts.join(", "))?;
        }
        // chains are stored pairwise; consecutive pairs sharing a side are re-joined
        let mut i = 0;
        while i < self.equations.len() {
            if i > 0 {
                f.write_str(" &&")?;
            }
            let (l, r) = &self.equations[i];
            write!(f, " {l} == {r}")?;
            let mut last = r;
            while i + 1 < self.equations.len() && &self.equations[i + 1].0 == last {
                i += 1;
                last = &self.equations[i].1;
                write!(f, " == {last}")?;
            }
            i += 1;
        }
        Ok(())
    }
}

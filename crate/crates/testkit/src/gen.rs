//! Random programs. Loops are mostly counter-bounded so that most samples
//! terminate; a small share of ill-typed or unbound uses exercises stuck runs.

use rand::rngs::StdRng;
use rand::Rng;

use crate::ast::*;
use crate::direct::{Machine, V};

pub const INT_VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub ext: bool,
    pub depth: u32,
    /// Probability of an ill-typed or unbound subexpression.
    pub noise: f64,
}

impl Config {
    pub fn base(depth: u32) -> Self {
        Config {
            ext: false,
            depth,
            noise: 0.03,
        }
    }

    pub fn ext(depth: u32) -> Self {
        Config {
            ext: true,
            depth,
            noise: 0.03,
        }
    }
}

struct Gen<'a> {
    rng: &'a mut StdRng,
    cfg: Config,
    counters: u32,
    /// Counters of the enclosing loops; never assigned in their bodies.
    busy: Vec<String>,
}

impl Gen<'_> {
    fn int_var(&mut self) -> Expr {
        if self.rng.gen_bool(self.cfg.noise) {
            return var("w");
        }
        var(INT_VARS[self.rng.gen_range(0..INT_VARS.len())])
    }

    fn int_expr(&mut self, d: u32) -> Expr {
        if self.rng.gen_bool(self.cfg.noise) {
            return self.bool_expr(d);
        }
        let leaf = d == 0 || self.rng.gen_ratio(2, 5);
        if leaf {
            return match self.rng.gen_range(0..10) {
                0..=3 => int(self.rng.gen_range(-3..=5)),
                8 if self.cfg.ext => Expr::In,
                9 if self.cfg.ext => deref(var("p")),
                _ => self.int_var(),
            };
        }
        match self.rng.gen_range(0..4) {
            0 if self.cfg.ext => deref(reference(self.int_expr(d - 1))),
            _ => add(self.int_expr(d - 1), self.int_expr(d - 1)),
        }
    }

    fn bool_expr(&mut self, d: u32) -> Expr {
        if d == 0 || self.rng.gen_bool(0.6) {
            return eq(
                self.int_expr(d.saturating_sub(1)),
                self.int_expr(d.saturating_sub(1)),
            );
        }
        not(self.bool_expr(d - 1))
    }

    fn target(&mut self) -> String {
        loop {
            let x = INT_VARS[self.rng.gen_range(0..INT_VARS.len())].to_string();
            if !self.busy.contains(&x) {
                return x;
            }
        }
    }

    fn stmt(&mut self, d: u32) -> Stmt {
        let leaf = d == 0 || self.rng.gen_ratio(1, 4);
        if leaf {
            let k = if self.cfg.ext { 7 } else { 3 };
            return match self.rng.gen_range(0..k) {
                0 => Stmt::Skip,
                3 => Stmt::Out(self.int_expr(1)),
                4 if self.rng.gen_ratio(1, 3) => Stmt::Throw,
                5 => assign("p", reference(self.int_expr(1))),
                6 => store(var("p"), self.int_expr(1)),
                _ => {
                    let x = self.target();
                    assign(&x, self.int_expr(2))
                }
            };
        }
        let k = if self.cfg.ext { 5 } else { 4 };
        match self.rng.gen_range(0..k) {
            0 => seq(vec![self.stmt(d - 1), self.stmt(d - 1)]),
            1 => if_(self.bool_expr(1), self.stmt(d - 1), self.stmt(d - 1)),
            2 => self.bounded_loop(d),
            3 if self.rng.gen_bool(0.1) => {
                // unbounded: may run out of fuel
                while_(self.bool_expr(1), self.stmt(d - 1))
            }
            3 => seq(vec![self.stmt(d - 1), self.stmt(d - 1)]),
            _ => try_(self.stmt(d - 1), self.stmt(d - 1)),
        }
    }

    fn bounded_loop(&mut self, d: u32) -> Stmt {
        let c = format!("c{}", self.counters);
        self.counters += 1;
        self.busy.push(c.clone());
        let body = self.stmt(d - 1);
        self.busy.pop();
        let n = self.rng.gen_range(0..=3);
        seq(vec![
            assign(&c, int(n)),
            while_(
                not(eq(var(&c), int(0))),
                seq(vec![body, assign(&c, add(var(&c), int(-1)))]),
            ),
        ])
    }
}

pub fn stmt(rng: &mut StdRng, cfg: Config) -> Stmt {
    let mut g = Gen {
        rng,
        cfg,
        counters: 0,
        busy: Vec::new(),
    };
    let body = g.stmt(cfg.depth);
    if cfg.ext {
        seq(vec![assign("p", reference(int(0))), body])
    } else {
        body
    }
}

pub fn int_expr(rng: &mut StdRng, cfg: Config) -> Expr {
    let mut g = Gen {
        rng,
        cfg,
        counters: 0,
        busy: Vec::new(),
    };
    g.int_expr(cfg.depth)
}

/// A starting machine binding every integer variable to a small value.
pub fn machine(rng: &mut StdRng, ext: bool) -> Machine {
    let mut m = Machine::default();
    for x in INT_VARS {
        m.vars
            .insert(x.into(), V::Int(rng.gen_range(-2..=4).into()));
    }
    if ext {
        let n = rng.gen_range(0..4);
        m.input = (0..n)
            .map(|_| V::Int(rng.gen_range(-2..=4).into()))
            .collect();
    }
    m
}

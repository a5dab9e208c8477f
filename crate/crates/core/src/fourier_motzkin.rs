//! Exact feasibility of mixed strict/non-strict/equality linear systems over the
//! rationals by Fourier–Motzkin elimination.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `a·x + c > 0`
    Greater,
    /// `a·x + c >= 0`
    GreaterEq,
    /// `a·x + c = 0`
    Equal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub relation: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, constant: BigRational, relation: Relation) -> Self {
        Constraint { coeffs, constant, relation }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn holds_trivially(&self) -> bool {
        match self.relation {
            Relation::Greater => self.constant.is_positive(),
            Relation::GreaterEq => !self.constant.is_negative(),
            Relation::Equal => self.constant.is_zero(),
        }
    }

    /// Scale so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let s = lead.abs().recip();
            for c in self.coeffs.iter_mut() {
                *c *= &s;
            }
            self.constant *= &s;
        }
        self
    }
}

/// Decide whether the system has a rational (equivalently real) solution.
pub fn is_feasible(constraints: &[Constraint]) -> bool {
    let nvars = constraints.first().map_or(0, |c| c.coeffs.len());
    let mut ineqs: Vec<Constraint> = Vec::new();
    let mut eqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), nvars);
        if c.relation == Relation::Equal {
            eqs.push(c.clone());
        } else {
            ineqs.push(c.clone());
        }
    }

    // Gaussian substitution removes the equalities.
    while let Some(eq) = eqs.pop() {
        let Some(j) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
            if !eq.constant.is_zero() {
                return false;
            }
            continue;
        };
        let pivot = eq.coeffs[j].clone();
        let substitute = |c: &mut Constraint| {
            if c.coeffs[j].is_zero() {
                return;
            }
            let f = &c.coeffs[j] / &pivot;
            for (x, y) in c.coeffs.iter_mut().zip(&eq.coeffs) {
                *x -= &f * y;
            }
            c.constant -= &f * &eq.constant;
        };
        eqs.iter_mut().for_each(substitute);
        ineqs.iter_mut().for_each(substitute);
    }

    let mut live: Vec<bool> = vec![true; nvars];
    loop {
        ineqs = match simplify(ineqs) {
            Some(v) => v,
            None => return false,
        };
        if ineqs.is_empty() {
            return true;
        }
        // eliminate the variable producing the fewest new constraints
        let mut best: Option<(usize, usize)> = None;
        for j in 0..nvars {
            if !live[j] {
                continue;
            }
            let pos = ineqs.iter().filter(|c| c.coeffs[j].is_positive()).count();
            let neg = ineqs.iter().filter(|c| c.coeffs[j].is_negative()).count();
            if pos + neg == 0 {
                live[j] = false;
                continue;
            }
            let cost = pos * neg;
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((j, cost));
            }
        }
        let Some((j, _)) = best else {
            // all remaining constraints are constant; simplify already checked them
            return true;
        };
        live[j] = false;
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in ineqs {
            if c.coeffs[j].is_positive() {
                pos.push(c);
            } else if c.coeffs[j].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = -&n.coeffs[j];
                let b = p.coeffs[j].clone();
                let coeffs: Vec<BigRational> = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &a + y * &b).collect();
                let constant = &p.constant * &a + &n.constant * &b;
                let relation = if p.relation == Relation::Greater || n.relation == Relation::Greater {
                    Relation::Greater
                } else {
                    Relation::GreaterEq
                };
                rest.push(Constraint { coeffs, constant, relation });
            }
        }
        ineqs = rest;
    }
}

/// Drop trivially true constraints, detect trivially false ones, normalize and
/// keep only the tightest constraint per direction.
fn simplify(ineqs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: HashMap<Vec<BigRational>, (BigRational, Relation)> = HashMap::new();
    let mut order: Vec<Vec<BigRational>> = Vec::new();
    for c in ineqs {
        if c.is_constant() {
            if !c.holds_trivially() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        match best.get_mut(&c.coeffs) {
            Some((k, r)) => {
                // smaller constant is tighter; strict wins ties
                if c.constant < *k || (c.constant == *k && c.relation == Relation::Greater) {
                    *k = c.constant;
                    *r = c.relation;
                }
            }
            None => {
                order.push(c.coeffs.clone());
                best.insert(c.coeffs, (c.constant, c.relation));
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|coeffs| {
                let (constant, relation) = best.remove(&coeffs).unwrap();
                Constraint { coeffs, constant, relation }
            })
            .collect(),
    )
}

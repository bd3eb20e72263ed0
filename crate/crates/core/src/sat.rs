//! Exactly-1 3-SAT as a Grover search with a gate-level oracle.
//!
//! Each clause has three literals over distinct variables; an assignment
//! satisfies the formula when every clause has exactly one true literal.
//!
//! Register layout, most significant first:
//!
//! ```text
//! x_n ... x_1 | f_out | aux_m ... aux_1 | scratch
//! ```
//!
//! Clause `k` writes `l1 ^ l2 ^ l3 ^ (l1 & l2 & l3)` into `aux_k`, which is 1
//! exactly when one literal holds. A multi-controlled X over all clause
//! ancillas flips `f_out`, and re-running the clause circuits returns the
//! ancillas to zero. Scratch qubits serve the Toffoli chains and are clean
//! on entry and exit.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::decompose::mcx_with_ancilla;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::grover::{diffusion_circuit, schedule, GroverSchedule, MarkedOracle};
use crate::measure::{exact_probabilities, sample_register, Histogram};
use crate::rng::SimRng;
use crate::state::{check_capacity, max_qubits, StateVector};

/// Largest variable count for which satisfying assignments are counted by
/// enumeration.
pub const MAX_BRUTE_FORCE_VARS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidArgument("formula has no clauses".into()));
        }
        if num_vars > 62 {
            return Err(Error::InvalidArgument(format!("{num_vars} variables")));
        }
        for (k, clause) in clauses.iter().enumerate() {
            check_clause(clause, num_vars).map_err(|m| Error::InvalidArgument(format!("clause {}: {m}", k + 1)))?;
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("[{},{},{}]", c[0], c[1], c[2]))
            .collect();
        write!(f, "[{}]", clauses.join(","))
    }
}

fn check_clause(clause: &[i32; 3], num_vars: usize) -> std::result::Result<(), String> {
    for (i, &l) in clause.iter().enumerate() {
        if l == 0 {
            return Err("literal 0 is not allowed".into());
        }
        if l.unsigned_abs() as usize > num_vars {
            return Err(format!("variable {} out of range 1..={num_vars}", l.unsigned_abs()));
        }
        if clause[..i].iter().any(|&m| m.unsigned_abs() == l.unsigned_abs()) {
            return Err(format!("variable {} repeated", l.unsigned_abs()));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Int(i64),
}

/// Tokens with 1-based (line, column).
fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        while let Some((i, ch)) = chars.next() {
            let tok = match ch {
                '[' => Tok::Open,
                ']' => Tok::Close,
                ',' => Tok::Comma,
                c if c.is_whitespace() => continue,
                '-' | '+' | '0'..='9' => {
                    let mut end = i + ch.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        end = j + 1;
                        chars.next();
                    }
                    let s = &line[i..end];
                    Tok::Int(s.parse().map_err(|_| Error::parse(n + 1, i + 1, format!("bad integer `{s}`")))?)
                }
                c => return Err(Error::parse(n + 1, i + 1, format!("unexpected character `{c}`"))),
            };
            out.push((tok, n + 1, i + 1));
        }
    }
    Ok(out)
}

fn literal(v: i64, line: usize, col: usize) -> Result<i32> {
    if v == 0 {
        return Err(Error::parse(line, col, "literal 0 is not allowed"));
    }
    i32::try_from(v).map_err(|_| Error::parse(line, col, format!("literal {v} out of range")))
}

fn parse_bracketed(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let end_pos = text.lines().count().max(1);
    let mut it = toks.into_iter();
    let expect = |want: Tok, what: &str, it: &mut std::vec::IntoIter<(Tok, usize, usize)>| match it.next() {
        Some((t, l, c)) if t == want => Ok((l, c)),
        Some((_, l, c)) => Err(Error::parse(l, c, format!("expected {what}"))),
        None => Err(Error::parse(end_pos, 1, format!("expected {what}, found end of input"))),
    };
    expect(Tok::Open, "`[`", &mut it)?;
    let mut clauses = Vec::new();
    let mut positions = Vec::new();
    loop {
        let (l, c) = expect(Tok::Open, "`[` starting a clause", &mut it)?;
        let mut lits = Vec::new();
        loop {
            match it.next() {
                Some((Tok::Int(v), l, c)) => lits.push((literal(v, l, c)?, l, c)),
                Some((_, l, c)) => return Err(Error::parse(l, c, "expected a literal")),
                None => return Err(Error::parse(end_pos, 1, "unterminated clause")),
            }
            match it.next() {
                Some((Tok::Comma, ..)) => continue,
                Some((Tok::Close, ..)) => break,
                Some((_, l, c)) => return Err(Error::parse(l, c, "expected `,` or `]`")),
                None => return Err(Error::parse(end_pos, 1, "unterminated clause")),
            }
        }
        if lits.len() != 3 {
            return Err(Error::parse(l, c, format!("clause has {} literals, expected 3", lits.len())));
        }
        clauses.push([lits[0].0, lits[1].0, lits[2].0]);
        positions.push(lits);
        match it.next() {
            Some((Tok::Comma, ..)) => continue,
            Some((Tok::Close, ..)) => break,
            Some((_, l, c)) => return Err(Error::parse(l, c, "expected `,` or `]`")),
            None => return Err(Error::parse(end_pos, 1, "unterminated list")),
        }
    }
    if let Some((_, l, c)) = it.next() {
        return Err(Error::parse(l, c, "trailing input after formula"));
    }
    let num_vars = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
    for (clause, pos) in clauses.iter().zip(&positions) {
        if let Err(m) = check_clause(clause, num_vars) {
            return Err(Error::parse(pos[0].1, pos[0].2, m));
        }
    }
    Formula::new(num_vars, clauses)
}

fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<(i32, usize, usize)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let indent = line.len() - trimmed.len();
        if trimmed.starts_with('p') {
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match words.as_slice() {
                ["p", "exactly1", v, m] => v.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            let (v, m) = parsed.ok_or_else(|| Error::parse(line_no, indent + 1, "expected header `p exactly1 <vars> <clauses>`"))?;
            if header.is_some() {
                return Err(Error::parse(line_no, indent + 1, "duplicate header"));
            }
            header = Some((v, m, line_no));
            continue;
        }
        let Some((num_vars, ..)) = header else {
            return Err(Error::parse(line_no, indent + 1, "clause before header"));
        };
        let mut offset = 0;
        for word in line.split_whitespace() {
            let at = line[offset..].find(word).expect("word from this line") + offset;
            offset = at + word.len();
            let col = at + 1;
            let v: i64 = word.parse().map_err(|_| Error::parse(line_no, col, format!("bad literal `{word}`")))?;
            if v == 0 {
                if current.len() != 3 {
                    return Err(Error::parse(line_no, col, format!("clause has {} literals, expected 3", current.len())));
                }
                let clause = [current[0].0, current[1].0, current[2].0];
                check_clause(&clause, num_vars).map_err(|m| Error::parse(current[0].1, current[0].2, m))?;
                clauses.push(clause);
                current.clear();
            } else {
                let l = literal(v, line_no, col)?;
                if l.unsigned_abs() as usize > num_vars {
                    return Err(Error::parse(line_no, col, format!("variable {} out of range 1..={num_vars}", l.unsigned_abs())));
                }
                current.push((l, line_no, col));
            }
        }
    }
    let Some((num_vars, num_clauses, header_line)) = header else {
        return Err(Error::parse(1, 1, "missing header `p exactly1 <vars> <clauses>`"));
    };
    if let Some(&(_, l, c)) = current.first() {
        return Err(Error::parse(l, c, "clause not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(Error::parse(header_line, 1, format!("header declares {num_clauses} clauses, found {}", clauses.len())));
    }
    Formula::new(num_vars, clauses)
}

/// Parses either `[[1,2,-3],[-1,-2,-3]]` or the line format with a
/// `p exactly1 <vars> <clauses>` header and `0`-terminated clauses.
pub fn parse_formula(text: &str) -> Result<Formula> {
    if text.trim_start().starts_with('[') {
        parse_bracketed(text)
    } else {
        parse_dimacs(text)
    }
}

/// Whether `assignment` (bit `i-1` holds `x_i`) makes exactly one literal
/// true in every clause.
pub fn classical_eval(f: &Formula, assignment: u64) -> bool {
    f.clauses.iter().all(|clause| {
        clause
            .iter()
            .filter(|&&l| {
                let value = (assignment >> (l.unsigned_abs() - 1)) & 1 == 1;
                value == (l > 0)
            })
            .count()
            == 1
    })
}

/// Every satisfying assignment, by enumeration.
pub fn satisfying_assignments(f: &Formula) -> Result<Vec<u64>> {
    if f.num_vars > MAX_BRUTE_FORCE_VARS {
        return Err(Error::InvalidArgument(format!(
            "{} variables is too many to enumerate; supply the solution count",
            f.num_vars
        )));
    }
    Ok((0..1u64 << f.num_vars).filter(|&x| classical_eval(f, x)).collect())
}

/// Renders an assignment as `x_1 x_2 ... x_n`.
pub fn assignment_string(assignment: u64, num_vars: usize) -> String {
    (0..num_vars)
        .map(|i| if (assignment >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLayout {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub num_scratch: usize,
}

impl OracleLayout {
    pub fn for_formula(f: &Formula) -> Self {
        Self {
            num_vars: f.num_vars,
            num_clauses: f.clauses.len(),
            num_scratch: f.clauses.len().saturating_sub(2).max(1),
        }
    }

    pub fn total_qubits(&self) -> usize {
        self.num_vars + 1 + self.num_clauses + self.num_scratch
    }

    pub fn scratch_qubits(&self) -> Vec<usize> {
        (0..self.num_scratch).collect()
    }

    /// Clause ancilla for clause `k` (0-based).
    pub fn aux(&self, k: usize) -> usize {
        self.num_scratch + k
    }

    pub fn aux_qubits(&self) -> Vec<usize> {
        (0..self.num_clauses).map(|k| self.aux(k)).collect()
    }

    pub fn f_out(&self) -> usize {
        self.num_scratch + self.num_clauses
    }

    /// Lowest qubit of the input register.
    pub fn input_lowest(&self) -> usize {
        self.f_out() + 1
    }

    /// Qubit holding variable `x_i` (1-based).
    pub fn var(&self, i: usize) -> usize {
        self.input_lowest() + i - 1
    }

}

/// Writes "exactly one literal true" for `clause` into the clause ancilla
/// `k`. Inputs and scratch are left as they were.
pub fn build_clause_circuit(clause: &[i32; 3], layout: &OracleLayout, k: usize) -> Result<Circuit> {
    if k >= layout.num_clauses {
        return Err(Error::InvalidArgument(format!("clause index {k}")));
    }
    check_clause(clause, layout.num_vars).map_err(Error::InvalidArgument)?;
    let total = layout.total_qubits();
    check_capacity(total, max_qubits())?;
    let aux = layout.aux(k);
    let qubits: Vec<usize> = clause.iter().map(|l| layout.var(l.unsigned_abs() as usize)).collect();
    let negated: Vec<usize> = clause.iter().zip(&qubits).filter(|(l, _)| **l < 0).map(|(_, &q)| q).collect();
    let mut c = Circuit::new(total);
    for &q in &negated {
        c.x(q);
    }
    for &q in &qubits {
        c.cx(q, aux);
    }
    c.extend(mcx_with_ancilla(&qubits, aux, &layout.scratch_qubits()[..1])?)?;
    for &q in &negated {
        c.x(q);
    }
    Ok(c)
}

/// `|x>|y>|0..0> -> |x>|y ^ f(x)>|0..0>` as gates.
pub fn build_oracle(f: &Formula) -> Result<(Circuit, OracleLayout)> {
    let layout = OracleLayout::for_formula(f);
    let total = layout.total_qubits();
    check_capacity(total, max_qubits())?;
    let mut clauses = Circuit::new(total);
    for (k, clause) in f.clauses.iter().enumerate() {
        clauses.append(&build_clause_circuit(clause, &layout, k)?)?;
    }
    let mut c = clauses.clone();
    let aux = layout.aux_qubits();
    c.extend(mcx_with_ancilla(&aux, layout.f_out(), &layout.scratch_qubits())?)?;
    c.append(&clauses)?;
    Ok((c, layout))
}

/// The permutation-level oracle with the same marked set.
pub fn marked_oracle(f: &Formula) -> Result<MarkedOracle> {
    MarkedOracle::new(f.num_vars, satisfying_assignments(f)?)
}

/// Initialization, `iterations` rounds of oracle and diffusion, all as
/// gates on the full register.
pub fn grover_sat_circuit(f: &Formula, iterations: usize) -> Result<(Circuit, OracleLayout)> {
    let (oracle, layout) = build_oracle(f)?;
    let total = layout.total_qubits();
    let mut c = Circuit::new(total);
    c.x(layout.f_out()).h(layout.f_out());
    for i in 1..=f.num_vars {
        c.h(layout.var(i));
    }
    let diffusion = diffusion_circuit(total, layout.input_lowest(), f.num_vars)?;
    for _ in 0..iterations {
        c.append(&oracle)?.append(&diffusion)?;
    }
    Ok((c, layout))
}

#[derive(Debug)]
pub struct SatSolution {
    /// Samples of the input register, keyed `x_n ... x_1`.
    pub histogram: Histogram,
    /// Exact input-register distribution, same keys.
    pub exact_probabilities: BTreeMap<String, f64>,
    pub iterations: usize,
    pub num_solutions: u64,
    pub schedule: GroverSchedule,
    /// Most likely input string.
    pub assignment: u64,
    /// Probability that a shot yields some satisfying assignment.
    pub success_probability: f64,
    pub layout: OracleLayout,
    pub gate_count: usize,
    pub state: StateVector,
}

impl SatSolution {
    /// `x_n ... x_1`, the order of the histogram keys.
    pub fn assignment_register_order(&self) -> String {
        crate::basis::render_bits(self.assignment, self.layout.num_vars)
    }

    /// `x_1 ... x_n`.
    pub fn assignment_x1_first(&self) -> String {
        assignment_string(self.assignment, self.layout.num_vars)
    }
}

/// Runs Grover with the gate-level oracle. `iterations` defaults to the
/// optimal count for the number of solutions, which is found by
/// enumeration unless given.
pub fn grover_sat_solve(
    f: &Formula,
    iterations: Option<usize>,
    num_solutions: Option<u64>,
    shots: u64,
    rng: &mut SimRng,
) -> Result<SatSolution> {
    let solutions = match num_solutions {
        Some(m) => m,
        None => satisfying_assignments(f)?.len() as u64,
    };
    if solutions == 0 {
        return Err(Error::Unsatisfiable);
    }
    let sched = schedule(f.num_vars, solutions)?;
    let k = iterations.unwrap_or(sched.k_opt);
    let (circuit, layout) = grover_sat_circuit(f, k)?;
    let mut state = StateVector::zero(layout.total_qubits())?;
    circuit.apply_to(&mut state)?;

    let probs = state.register_distribution(layout.input_lowest(), f.num_vars)?;
    let histogram = sample_register(&state, layout.input_lowest(), f.num_vars, shots, rng)?;
    let assignment = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(j, _)| j as u64)
        .expect("nonempty register");
    let success_probability = probs
        .iter()
        .enumerate()
        .filter(|(j, _)| classical_eval(f, *j as u64))
        .map(|(_, p)| p)
        .sum();
    Ok(SatSolution {
        histogram,
        exact_probabilities: exact_probabilities(&probs, f.num_vars),
        iterations: k,
        num_solutions: solutions,
        schedule: sched,
        assignment,
        success_probability,
        layout,
        gate_count: circuit.len(),
        state,
    })
}

//! Command implementations behind the `qreg` binary.
//!
//! Each command returns a [`RunReport`] (or [`BenchReport`]) that renders
//! either as an ASCII histogram or as JSON. Everything except the timing
//! fields is a pure function of the inputs and the seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::basis::{dot_parity, render_bits};
use crate::circuit::decompose::{decompose, lower_to_cnot};
use crate::circuit::route::{route, CouplingGraph};
use crate::circuit::{format, Circuit};
use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::grover::{grover_circuit, grover_run, schedule, MarkedOracle};
use crate::measure::{exact_probabilities, sample_distribution, Histogram};
use crate::rng::{SimRng, DEFAULT_SEED};
use crate::sat::{assignment_string, grover_sat_solve, parse_formula};
use crate::simon::{classical_baseline, make_oracle, simon_final_state, simon_solve};
use crate::state::StateVector;

/// Exact probabilities are reported up to this many measured qubits.
pub const EXACT_REPORT_QUBITS: usize = 20;

/// Width of the longest histogram bar.
pub const BAR_WIDTH: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl Default for SeedArg {
    fn default() -> Self {
        SeedArg::Fixed(DEFAULT_SEED)
    }
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an integer or `random`, got `{s}`"))
    }
}

impl SeedArg {
    /// The generator and the seed that reproduces it.
    pub fn resolve(self) -> (SimRng, u64) {
        match self {
            SeedArg::Fixed(s) => (SimRng::seed_from(s), s),
            SeedArg::Random => SimRng::from_entropy(),
        }
    }
}

/// `auto` or a fixed count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Iterations {
    #[default]
    Auto,
    Fixed(usize),
}

impl FromStr for Iterations {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Iterations::Auto);
        }
        s.parse()
            .map(Iterations::Fixed)
            .map_err(|_| format!("expected a count or `auto`, got `{s}`"))
    }
}

impl Iterations {
    fn fixed(self) -> Option<usize> {
        match self {
            Iterations::Auto => None,
            Iterations::Fixed(k) => Some(k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Ascii,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ascii" => Ok(OutputFormat::Ascii),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("expected `ascii` or `json`, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub qubits: usize,
    pub gates: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub shots: u64,
    pub histogram: Histogram,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_probabilities: Option<BTreeMap<String, f64>>,
    /// Seconds per phase.
    pub timing: BTreeMap<String, f64>,
    pub metadata: Metadata,
    /// Command-specific fields.
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}  qubits={} gates={} shots={} seed={}",
            self.command, self.metadata.qubits, self.metadata.gates, self.shots, self.seed
        );
        for (k, v) in &self.extra {
            let _ = writeln!(out, "{k}: {}", compact(v));
        }
        out.push_str(&render_histogram(&self.histogram, self.exact_probabilities.as_ref()));
        let phases: Vec<String> = self
            .timing
            .iter()
            .map(|(k, s)| format!("{k} {:.3} ms", s * 1e3))
            .collect();
        let _ = writeln!(out, "timing: {}", phases.join(", "));
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Ascii => self.to_ascii(),
            OutputFormat::Json => self.to_json() + "\n",
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One line per outcome: key, bar scaled so the largest count spans
/// [`BAR_WIDTH`] columns, count, and the exact probability when known.
pub fn render_histogram(h: &Histogram, exact: Option<&BTreeMap<String, f64>>) -> String {
    let max = h.values().copied().max().unwrap_or(0).max(1);
    let mut out = String::new();
    for (key, &count) in h {
        let len = ((count as f64 / max as f64) * BAR_WIDTH as f64).round() as usize;
        let _ = write!(out, "{key} |{:<width$}| {count}", "#".repeat(len), width = BAR_WIDTH);
        if let Some(p) = exact.and_then(|e| e.get(key)) {
            let _ = write!(out, "  p={p:.9}");
        }
        out.push('\n');
    }
    out
}

struct Clock {
    last: Instant,
    phases: BTreeMap<String, f64>,
}

impl Clock {
    fn start() -> Self {
        Self {
            last: Instant::now(),
            phases: BTreeMap::new(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases.insert(phase.to_string(), (now - self.last).as_secs_f64());
        self.last = now;
    }
}

fn histogram_from_counts(counts: &[u64], width: usize) -> Histogram {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| (render_bits(j as u64, width), c))
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub shots: u64,
    pub seed: SeedArg,
    /// Lower to single-qubit gates and CNOTs before running.
    pub decompose: bool,
    pub coupling: Option<CouplingGraph>,
}

/// Simulates a circuit file from `|0...0>` and samples every qubit.
pub fn cmd_run(circuit_text: &str, opts: &RunOptions) -> Result<RunReport> {
    if opts.shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let (mut rng, seed) = opts.seed.resolve();
    let mut clock = Clock::start();
    let mut circuit = format::parse(circuit_text)?;
    let q = circuit.num_qubits();
    crate::state::check_capacity(q, crate::state::max_qubits())?;
    let mut extra = BTreeMap::new();
    if opts.decompose {
        circuit = lower_to_cnot(&circuit);
    }
    let mut layout: Option<Vec<usize>> = None;
    if let Some(graph) = &opts.coupling {
        if circuit.steps().iter().any(|g| g.num_qubits_touched() > 2) {
            circuit = decompose(&circuit);
        }
        let routed = route(&circuit, graph)?;
        extra.insert("swaps_inserted".into(), json!(routed.swaps_inserted));
        extra.insert("final_layout".into(), json!(routed.final_layout));
        layout = Some(routed.final_layout);
        circuit = routed.circuit;
    }
    clock.lap("parse");

    let mut state = StateVector::zero(circuit.num_qubits())?;
    circuit.apply_to(&mut state)?;
    clock.lap("simulate");

    // read results back in logical qubit order
    let probs = match &layout {
        None => state.probabilities(),
        Some(layout) => {
            let mut logical = vec![0.0; 1 << q];
            for (p, z) in state.amplitudes().iter().enumerate() {
                let j: usize = layout
                    .iter()
                    .enumerate()
                    .map(|(l, &phys)| ((p >> phys) & 1) << l)
                    .sum();
                logical[j] += z.norm_sqr();
            }
            logical
        }
    };
    let counts = sample_distribution(&probs, opts.shots, &mut rng)?;
    clock.lap("sample");
    Ok(RunReport {
        command: "run".into(),
        seed,
        shots: opts.shots,
        histogram: histogram_from_counts(&counts, q),
        exact_probabilities: (q <= EXACT_REPORT_QUBITS).then(|| exact_probabilities(&probs, q)),
        timing: clock.phases,
        metadata: Metadata {
            qubits: circuit.num_qubits(),
            gates: circuit.len(),
        },
        extra,
    })
}

/// Recovers the hidden string with the quantum routine and with the
/// classical collision search, and reports both query counts.
pub fn cmd_simon(n: usize, hidden_a: u64, max_samples: usize, seed: SeedArg) -> Result<RunReport> {
    let (mut rng, seed) = seed.resolve();
    let mut clock = Clock::start();
    let oracle = make_oracle(n, hidden_a)?;
    let mut quantum_rng = rng.split();
    let solved = simon_solve(&oracle, max_samples, &mut quantum_rng)?;
    clock.lap("quantum");
    let classical = classical_baseline(&oracle, &mut rng);
    clock.lap("classical");

    let mut counts = vec![0u64; 1 << n];
    for &k in &solved.samples {
        counts[k as usize] += 1;
    }
    let exact = if 2 * n <= EXACT_REPORT_QUBITS {
        let probs = simon_final_state(&oracle)?.register_distribution(n, n)?;
        Some(exact_probabilities(&probs, n))
    } else {
        None
    };
    let all_orthogonal = solved.samples.iter().all(|&k| dot_parity(k, hidden_a) == 0);
    let extra = BTreeMap::from([
        ("hidden_a".to_string(), json!(render_bits(hidden_a, n))),
        ("recovered_a".to_string(), json!(render_bits(solved.a, n))),
        ("quantum_queries".to_string(), json!(solved.quantum_queries)),
        ("verification_queries".to_string(), json!(solved.verification_queries)),
        ("classical_queries".to_string(), json!(classical.queries)),
        ("classical_a".to_string(), json!(render_bits(classical.a, n))),
        (
            "samples".to_string(),
            json!(solved.samples.iter().map(|&k| render_bits(k, n)).collect::<Vec<_>>()),
        ),
        ("rank_trace".to_string(), json!(solved.rank_trace)),
        ("samples_orthogonal".to_string(), json!(all_orthogonal)),
    ]);
    Ok(RunReport {
        command: "simon".into(),
        seed,
        shots: solved.samples.len() as u64,
        histogram: histogram_from_counts(&counts, n),
        exact_probabilities: exact,
        timing: clock.phases,
        metadata: Metadata {
            qubits: 2 * n,
            // H layer, one oracle call, H layer
            gates: 2 * n + 1,
        },
        extra,
    })
}

/// Grover search over `n` bits with the oracle applied as a permutation.
pub fn cmd_grover(
    n: usize,
    marked: &[u64],
    iterations: Iterations,
    shots: u64,
    seed: SeedArg,
) -> Result<RunReport> {
    let (mut rng, seed) = seed.resolve();
    let mut clock = Clock::start();
    let oracle = MarkedOracle::new(n, marked.iter().copied())?;
    if oracle.marked().is_empty() {
        return Err(Error::InvalidArgument("no marked strings".into()));
    }
    let sched = schedule(n, oracle.marked().len() as u64)?;
    let k = iterations.fixed().unwrap_or(sched.k_opt);
    let run = grover_run(&oracle, k, shots, &mut rng)?;
    clock.lap("simulate");
    let probs = run.state.register_distribution(1, n)?;
    let success: f64 = oracle.marked().iter().map(|&l| probs[l as usize]).sum();
    let extra = BTreeMap::from([
        ("iterations".to_string(), json!(k)),
        ("k_opt".to_string(), json!(sched.k_opt)),
        ("theta".to_string(), json!(sched.theta)),
        ("predicted_success".to_string(), json!(sched.success_after(k))),
        ("success_probability".to_string(), json!(success)),
        (
            "marked".to_string(),
            json!(oracle.marked().iter().map(|&l| render_bits(l, n)).collect::<Vec<_>>()),
        ),
    ]);
    Ok(RunReport {
        command: "grover".into(),
        seed,
        shots,
        histogram: run.histogram,
        exact_probabilities: (n <= EXACT_REPORT_QUBITS).then(|| exact_probabilities(&probs, n)),
        timing: clock.phases,
        metadata: Metadata {
            qubits: n + 1,
            // size of the equivalent gate-level circuit; the run itself
            // applies the oracle and diffusion directly
            gates: grover_circuit(&oracle, k)?.len(),
        },
        extra,
    })
}

/// Exactly-1 3-SAT through Grover with the gate-level oracle.
pub fn cmd_grover_sat(
    formula_text: &str,
    iterations: Iterations,
    shots: u64,
    seed: SeedArg,
) -> Result<RunReport> {
    let (mut rng, seed) = seed.resolve();
    let mut clock = Clock::start();
    let formula = parse_formula(formula_text)?;
    clock.lap("parse");
    let s = grover_sat_solve(&formula, iterations.fixed(), None, shots, &mut rng)?;
    clock.lap("simulate");
    let n = formula.num_vars();
    let extra = BTreeMap::from([
        ("formula".to_string(), json!(formula.to_string())),
        ("iterations".to_string(), json!(s.iterations)),
        ("k_opt".to_string(), json!(s.schedule.k_opt)),
        ("num_solutions".to_string(), json!(s.num_solutions)),
        ("satisfiable".to_string(), json!(true)),
        ("assignment".to_string(), json!(s.assignment_x1_first())),
        ("assignment_register_order".to_string(), json!(s.assignment_register_order())),
        ("success_probability".to_string(), json!(s.success_probability)),
        (
            "bit_order".to_string(),
            json!("histogram keys are x_n..x_1; assignment is x_1..x_n"),
        ),
    ]);
    debug_assert_eq!(assignment_string(s.assignment, n).len(), n);
    Ok(RunReport {
        command: "grover-sat".into(),
        seed,
        shots,
        histogram: s.histogram,
        exact_probabilities: Some(s.exact_probabilities),
        timing: clock.phases,
        metadata: Metadata {
            qubits: s.layout.total_qubits(),
            gates: s.gate_count,
        },
        extra,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub qubits: usize,
    /// Fastest layer over the repetitions, in seconds.
    pub seconds: f64,
    /// `seconds` divided by the previous row's.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub command: String,
    pub gate: String,
    pub reps: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            OutputFormat::Ascii => {
                let mut out = format!("bench  gate={} reps={}\n", self.gate, self.reps);
                out.push_str("qubits  layer_ms    ratio\n");
                for r in &self.rows {
                    let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
                    let _ = writeln!(out, "{:>6}  {:>8.3}  {:>7}", r.qubits, r.seconds * 1e3, ratio);
                }
                out
            }
        }
    }
}

/// Time for one layer of `gate` on every qubit of a `q`-qubit register,
/// minimum over `reps` layers.
pub fn time_layer(q: usize, gate: GateKind, reps: usize) -> Result<f64> {
    if !gate.is_single_qubit() {
        return Err(Error::InvalidArgument(format!("`{}` is not a single-qubit gate", gate.name())));
    }
    let mut layer = Circuit::new(q);
    for k in 0..q {
        layer.gate(gate, k);
    }
    let mut state = StateVector::zero(q)?;
    let mut best = f64::INFINITY;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        layer.apply_to(&mut state)?;
        best = best.min(t.elapsed().as_secs_f64());
    }
    Ok(best)
}

/// Per-layer timings for each register size in `qubits`.
pub fn cmd_bench(qubits: &[usize], gate: &str, reps: usize) -> Result<BenchReport> {
    let kind = GateKind::from_name(gate, 1, &[])?;
    for &q in qubits {
        crate::state::check_capacity(q, crate::state::max_qubits())?;
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for &q in qubits {
        let seconds = time_layer(q, kind, reps)?;
        let ratio = rows.last().map(|prev| seconds / prev.seconds);
        rows.push(BenchRow { qubits: q, seconds, ratio });
    }
    Ok(BenchReport {
        command: "bench".into(),
        gate: gate.to_string(),
        reps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(seed: u64) -> SeedArg {
        SeedArg::Fixed(seed)
    }

    #[test]
    fn run_hadamard() {
        let opts = RunOptions {
            shots: 1000,
            seed: fixed(5),
            ..Default::default()
        };
        let r = cmd_run("qubits 1\nh 0\n", &opts).unwrap();
        assert_eq!(r.histogram.values().sum::<u64>(), 1000);
        for c in r.histogram.values() {
            assert!((*c as i64 - 500).abs() < 3 * 16);
        }
        let exact = r.exact_probabilities.as_ref().unwrap();
        assert!((exact.values().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn run_empty_and_deterministic() {
        let opts = RunOptions {
            shots: 64,
            seed: fixed(1),
            ..Default::default()
        };
        let r = cmd_run("qubits 2\n", &opts).unwrap();
        assert_eq!(r.histogram, Histogram::from([("00".to_string(), 64)]));
        let text = "qubits 3\nh 0\nh 2\ncx 2,1\n";
        let mut a = cmd_run(text, &opts).unwrap();
        let mut b = cmd_run(text, &opts).unwrap();
        a.timing.clear();
        b.timing.clear();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn run_with_decompose_and_coupling() {
        let text = "qubits 3\nh 2\nccx 2,1,0\nx 1\nccx 2,1,0\n";
        let base = cmd_run(text, &RunOptions { shots: 100, seed: fixed(3), ..Default::default() }).unwrap();
        let lowered = cmd_run(
            text,
            &RunOptions {
                shots: 100,
                seed: fixed(3),
                decompose: true,
                coupling: Some(CouplingGraph::line(3)),
            },
        )
        .unwrap();
        let (e1, e2) = (base.exact_probabilities.unwrap(), lowered.exact_probabilities.unwrap());
        assert_eq!(e1.keys().collect::<Vec<_>>(), e2.keys().collect::<Vec<_>>());
        for (k, p) in &e1 {
            assert!((p - e2[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn simon_report() {
        let r = cmd_simon(5, 19, 60, fixed(2)).unwrap();
        assert_eq!(r.extra["recovered_a"], json!("10011"));
        assert_eq!(r.extra["samples_orthogonal"], json!(true));
        let r = cmd_simon(3, 0, 60, fixed(2)).unwrap();
        assert_eq!(r.extra["recovered_a"], json!("000"));
    }

    #[test]
    fn grover_sat_report() {
        let f = "[[1,2,-3],[-1,-2,-3],[-1,2,3]]";
        let r = cmd_grover_sat(f, Iterations::Auto, 2048, fixed(9)).unwrap();
        let top = r.histogram.iter().max_by_key(|(_, &c)| c).unwrap().0;
        assert_eq!(top, "101");
        assert!((r.exact_probabilities.as_ref().unwrap()["101"] - 0.9453125).abs() < 1e-9);
        let r4 = cmd_grover_sat(f, Iterations::Fixed(4), 256, fixed(9)).unwrap();
        assert!(r4.exact_probabilities.unwrap()["101"] < 0.9453125);
        let r0 = cmd_grover_sat(f, Iterations::Fixed(0), 256, fixed(9)).unwrap();
        assert_eq!(r0.histogram.len(), 8);
        assert!(r.to_ascii().contains("101 |########################################|"));
    }

    #[test]
    fn grover_report() {
        let r = cmd_grover(6, &[11, 40], Iterations::Auto, 500, fixed(4)).unwrap();
        assert!(r.extra["success_probability"].as_f64().unwrap() > 0.9);
    }

    #[test]
    fn bench_capacity_error() {
        assert!(matches!(cmd_bench(&[64], "h", 1), Err(Error::Capacity { .. })));
        let r = cmd_bench(&[4, 5], "h", 2).unwrap();
        assert_eq!(r.rows.len(), 2);
    }

    #[test]
    fn arg_parsing() {
        assert_eq!("random".parse::<SeedArg>().unwrap(), SeedArg::Random);
        assert_eq!("17".parse::<SeedArg>().unwrap(), SeedArg::Fixed(17));
        assert!("x".parse::<SeedArg>().is_err());
        assert_eq!("auto".parse::<Iterations>().unwrap(), Iterations::Auto);
        assert_eq!("3".parse::<Iterations>().unwrap(), Iterations::Fixed(3));
        assert!("yaml".parse::<OutputFormat>().is_err());
    }
}

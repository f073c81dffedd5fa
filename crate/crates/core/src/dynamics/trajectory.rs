use std::io::{self, Write};

use serde::Serialize;

use super::state::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Lindblad,
    NonHermitian,
    Manifold,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Lindblad => "lindblad",
            SolverKind::NonHermitian => "nonhermitian",
            SolverKind::Manifold => "manifold",
        }
    }
}

/// Observables recorded on a uniform time grid.
///
/// Wave-packet expectation values are `⟨Ψ|O|Ψ⟩` without renormalization, and
/// `norm_or_trace` holds `⟨Ψ|Ψ⟩` for wave packets or `tr ρ` for density
/// matrices.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub solver: SolverKind,
    pub times: Vec<f64>,
    /// `dot_populations[j][k]` is ⟨σ_{j+1}†σ_{j+1}⟩ at `times[k]`.
    pub dot_populations: Vec<Vec<f64>>,
    pub plasmon_population: Vec<f64>,
    /// ⟨μ⟩ in Debye.
    pub dipole: Vec<f64>,
    pub norm_or_trace: Vec<f64>,
    /// Density-matrix health per recorded time (Lindblad only).
    pub hermiticity: Vec<f64>,
    pub min_eigenvalue: Vec<f64>,
    pub snapshots: Vec<(f64, QuantumState)>,
}

impl Trajectory {
    pub fn new(solver: SolverKind, n_dots: usize) -> Self {
        Trajectory {
            solver,
            times: Vec::new(),
            dot_populations: vec![Vec::new(); n_dots],
            plasmon_population: Vec::new(),
            dipole: Vec::new(),
            norm_or_trace: Vec::new(),
            hermiticity: Vec::new(),
            min_eigenvalue: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_dots(&self) -> usize {
        self.dot_populations.len()
    }

    /// Spacing of the recorded grid.
    pub fn record_step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    /// Index of the recorded time closest to `t`.
    pub fn index_near(&self, t: f64) -> usize {
        let step = self.record_step();
        if step == 0.0 {
            return 0;
        }
        let k = ((t - self.times[0]) / step).round().max(0.0) as usize;
        k.min(self.times.len() - 1)
    }

    /// Named columns excluding time, in CSV order.
    pub fn columns(&self) -> Vec<(String, &[f64])> {
        let mut cols: Vec<(String, &[f64])> = self
            .dot_populations
            .iter()
            .enumerate()
            .map(|(j, v)| (format!("pop_dot_{}", j + 1), v.as_slice()))
            .collect();
        cols.push(("pop_plasmon".into(), &self.plasmon_population));
        cols.push(("mu_expect".into(), &self.dipole));
        cols.push(("norm_or_trace".into(), &self.norm_or_trace));
        cols
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let cols = self.columns();
        let mut header = String::from("t_fs");
        for (name, _) in &cols {
            header.push(',');
            header.push_str(name);
        }
        writeln!(w, "{header}")?;
        for (k, t) in self.times.iter().enumerate() {
            let mut line = fmt_sig(*t);
            for (_, col) in &cols {
                line.push(',');
                line.push_str(&fmt_sig(col[k]));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Twelve significant digits, scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

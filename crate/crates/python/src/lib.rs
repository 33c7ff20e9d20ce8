//! Python bindings: parse, run, minimize and check automata.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rva_core::alphabet::EncodingKind;
use rva_core::automaton::Automaton as CoreAutomaton;
use rva_core::check::{check, CheckMode};
use rva_core::encoding::Lasso;
use rva_core::format::{parse_automaton, serialize_automaton};
use rva_core::generate::{gen_known_rva, Family};
use rva_core::minimize::minimize_weak;
use rva_core::oracle::{expand_witness, saturation_oracle, Reading};
use rva_core::word::{parse_lasso, to_indices};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A weak deterministic Büchi automaton over a digit alphabet.
#[pyclass(frozen, name = "Automaton")]
struct Automaton {
    inner: CoreAutomaton,
}

/// Outcome of a saturation check.
#[pyclass(frozen, get_all, name = "Verdict")]
struct Verdict {
    answer: bool,
    /// Witness kind, e.g. `zero-loop-broken`, or `None`.
    kind: Option<String>,
    /// Human-readable witness, or `None`.
    witness: Option<String>,
    /// Concrete counterexample words, when the witness expands to one.
    counterexample: Option<String>,
}

#[pymethods]
impl Verdict {
    fn __bool__(&self) -> bool {
        self.answer
    }

    fn __repr__(&self) -> String {
        match &self.witness {
            None => "Verdict(yes)".to_string(),
            Some(w) => format!("Verdict(no: {w})"),
        }
    }
}

#[pymethods]
impl Automaton {
    /// Parses the text format.
    #[staticmethod]
    #[pyo3(signature = (text, complete_with_sink = false))]
    fn parse(text: &str, complete_with_sink: bool) -> PyResult<Automaton> {
        let inner = parse_automaton(text, complete_with_sink).map_err(value_error)?;
        Ok(Automaton { inner })
    }

    /// A member of a known saturated family, e.g. `full-space`.
    #[staticmethod]
    fn known(kind: &str, base: u32, dim: usize, encoding: &str) -> PyResult<Automaton> {
        let family: Family = kind.parse().map_err(value_error)?;
        let encoding = match encoding {
            "parallel" => EncodingKind::Parallel,
            "sequential" => EncodingKind::Sequential,
            other => return Err(value_error(format!("unknown encoding `{other}`"))),
        };
        let inner = gen_known_rva(family, base, dim, encoding).map_err(value_error)?;
        Ok(Automaton { inner })
    }

    fn to_text(&self) -> String {
        serialize_automaton(&self.inner)
    }

    #[getter]
    fn states(&self) -> usize {
        self.inner.state_count()
    }

    fn is_weak(&self) -> bool {
        self.inner.is_weak()
    }

    /// Whether the lasso word `prefix / period` is accepted.
    fn accepts(&self, word: &str) -> PyResult<bool> {
        let lasso = parse_lasso(word).map_err(value_error)?;
        if lasso.period.is_empty() {
            return Err(value_error("the word needs a period: write `prefix / period`"));
        }
        let alphabet = self.inner.alphabet();
        let prefix = to_indices(&lasso.prefix, alphabet).map_err(value_error)?;
        let period = to_indices(&lasso.period, alphabet).map_err(value_error)?;
        Ok(self.inner.accepts_lasso(&prefix, &period))
    }

    /// The minimal automaton and, for each of its states, the original
    /// states mapped to it.
    fn minimize(&self) -> PyResult<(Automaton, Vec<Vec<usize>>)> {
        let morphism = minimize_weak(&self.inner).map_err(value_error)?;
        let classes = morphism.classes();
        Ok((Automaton { inner: morphism.target }, classes))
    }

    /// Decides saturation; `mode` is parallel, sequential, dim1 or
    /// complement.
    fn check(&self, mode: &str) -> PyResult<Verdict> {
        let mode: CheckMode = mode.parse().map_err(value_error)?;
        let verdict = check(&self.inner, mode).map_err(value_error)?;
        let alphabet = self.inner.alphabet();
        let witness = verdict.witness();
        let kind = witness.map(witness_kind);
        let counterexample = witness
            .and_then(|w| expand_witness(&self.inner, w))
            .map(|cx| cx.describe(alphabet));
        Ok(Verdict {
            answer: verdict.answer(),
            kind,
            witness: witness.map(|w| w.describe(alphabet)),
            counterexample,
        })
    }

    /// Independent search for a counterexample; `None` when saturated.
    #[pyo3(signature = (complement = false))]
    fn oracle(&self, complement: bool) -> PyResult<Option<String>> {
        let reading = if complement { Reading::Complement } else { Reading::Unsigned };
        let outcome = saturation_oracle(&self.inner, reading, None).map_err(value_error)?;
        if outcome.saturated() {
            return Ok(None);
        }
        Ok(Some(outcome.counterexample().map_or_else(
            || "the automaton is not weak".to_string(),
            |cx| cx.describe(self.inner.alphabet()),
        )))
    }

    fn __repr__(&self) -> String {
        let a = self.inner.alphabet();
        format!(
            "Automaton(states={}, base={}, dim={}, encoding={})",
            self.inner.state_count(),
            a.base(),
            a.dim(),
            a.encoding()
        )
    }
}

/// Kebab-case name of a witness variant.
fn witness_kind(w: &rva_core::check::Witness) -> String {
    use rva_core::check::Witness::*;
    match w {
        NotWeak => "not-weak",
        NotShape { .. } => "not-shape",
        ZeroLoopBroken { .. } => "zero-loop-broken",
        PairMismatch { .. } => "pair-mismatch",
        ComplementPrefix { .. } => "complement-prefix",
        SignNotAbsorbed { .. } => "sign-not-absorbed",
        ComplementInitialLanguage { .. } => "complement-initial-language",
    }
    .to_string()
}

/// Exact value of an encoding `prefix / period` over the automaton's
/// alphabet, as a list of `p/q` strings.
#[pyfunction]
#[pyo3(signature = (automaton, word, complement = false))]
fn value(automaton: &Automaton, word: &str, complement: bool) -> PyResult<Vec<String>> {
    let lasso = parse_lasso(word).map_err(value_error)?;
    let alphabet = automaton.inner.alphabet();
    let indices = Lasso::new(
        to_indices(&lasso.prefix, alphabet).map_err(value_error)?,
        to_indices(&lasso.period, alphabet).map_err(value_error)?,
    );
    let reading = if complement { Reading::Complement } else { Reading::Unsigned };
    let v = rva_core::oracle::value_of(&indices, alphabet, reading).map_err(value_error)?;
    Ok(v.0.iter().map(|r| r.to_string()).collect())
}

#[pymodule]
fn rva(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Automaton>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(value, m)?)?;
    Ok(())
}

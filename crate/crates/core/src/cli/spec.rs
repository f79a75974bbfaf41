//! Textual state descriptions.
//!
//! ```text
//! fock <n> <N>            |n, N-n>
//! amps <a0> <a1> ...      amplitudes φ_0..φ_N, each "re,im" or a real; normalized
//! oat <N> <theta>         one-axis-twisted coherent state
//! oat <N> <t0>:<t1>:<K>   K evenly spaced angles (bounds sweeps only)
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::entanglement::one_axis_twist;
use crate::mixing::mapfile::parse_complex;
use crate::states::{make_fock, TwoModeState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { n: usize, total: usize },
    Amplitudes(Vec<Complex64>),
    Oat { total: usize, theta: f64 },
    OatSweep { total: usize, from: f64, to: f64, points: usize },
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &text[s..i],
                    column: text[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn at(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("column {column}"),
        message: message.into(),
    }
}

fn parse_count(tok: &Token<'_>, what: &str) -> Result<usize> {
    tok.text
        .parse()
        .map_err(|_| at(tok.column, format!("{what} must be a non-negative integer, got '{}'", tok.text)))
}

fn parse_real(tok: &Token<'_>, text: &str, what: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(at(tok.column, format!("{what} must be a finite real, got '{text}'"))),
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let toks = tokens(text);
        let Some(head) = toks.first() else {
            return Err(at(1, "empty state description"));
        };
        let end = text.chars().count() + 1;
        let expect = |count: usize, usage: &str| -> Result<()> {
            match toks.len().cmp(&count) {
                std::cmp::Ordering::Less => Err(at(end, format!("missing arguments; usage: {usage}"))),
                std::cmp::Ordering::Greater => Err(at(
                    toks[count].column,
                    format!("unexpected '{}'; usage: {usage}", toks[count].text),
                )),
                std::cmp::Ordering::Equal => Ok(()),
            }
        };
        match head.text {
            "fock" => {
                expect(3, "fock <n> <N>")?;
                let n = parse_count(&toks[1], "n")?;
                let total = parse_count(&toks[2], "N")?;
                if n > total {
                    return Err(at(toks[1].column, format!("n = {n} exceeds N = {total}")));
                }
                Ok(StateSpec::Fock { n, total })
            }
            "amps" => {
                if toks.len() < 2 {
                    return Err(at(end, "amplitude list is empty"));
                }
                let amps = toks[1..]
                    .iter()
                    .map(|t| {
                        parse_complex(t.text)
                            .filter(|z| z.re.is_finite() && z.im.is_finite())
                            .ok_or_else(|| at(t.column, format!("bad amplitude '{}'", t.text)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if amps.iter().all(|z| z.norm_sqr() == 0.0) {
                    return Err(at(toks[1].column, "amplitudes are all zero"));
                }
                Ok(StateSpec::Amplitudes(amps))
            }
            "oat" => {
                expect(3, "oat <N> <theta> | oat <N> <t0>:<t1>:<points>")?;
                let total = parse_count(&toks[1], "N")?;
                let tok = &toks[2];
                let parts: Vec<&str> = tok.text.split(':').collect();
                match parts.as_slice() {
                    [theta] => Ok(StateSpec::Oat {
                        total,
                        theta: parse_real(tok, theta, "theta")?,
                    }),
                    [from, to, points] => {
                        let points: usize = points.parse().ok().filter(|&k| k >= 1).ok_or_else(|| {
                            at(tok.column, format!("sweep needs a positive point count, got '{points}'"))
                        })?;
                        Ok(StateSpec::OatSweep {
                            total,
                            from: parse_real(tok, from, "sweep start")?,
                            to: parse_real(tok, to, "sweep end")?,
                            points,
                        })
                    }
                    _ => Err(at(tok.column, format!("expected theta or t0:t1:points, got '{}'", tok.text))),
                }
            }
            other => Err(at(
                head.column,
                format!("unknown state kind '{other}' (expected fock, amps or oat)"),
            )),
        }
    }

    pub fn is_sweep(&self) -> bool {
        matches!(self, StateSpec::OatSweep { .. })
    }

    /// Angles of a sweep, or the single angle of an `oat` spec.
    pub fn angles(&self) -> Vec<f64> {
        match *self {
            StateSpec::Oat { theta, .. } => vec![theta],
            StateSpec::OatSweep { from, to, points, .. } => {
                if points == 1 {
                    return vec![from];
                }
                let step = (to - from) / (points - 1) as f64;
                (0..points).map(|k| from + step * k as f64).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn total_particles(&self) -> usize {
        match self {
            StateSpec::Fock { total, .. }
            | StateSpec::Oat { total, .. }
            | StateSpec::OatSweep { total, .. } => *total,
            StateSpec::Amplitudes(a) => a.len() - 1,
        }
    }

    /// The described state; sweeps describe many and are rejected here.
    pub fn to_state(&self) -> Result<TwoModeState> {
        match self {
            StateSpec::Fock { n, total } => make_fock(*n, *total),
            StateSpec::Amplitudes(a) => TwoModeState::normalized(a.clone()),
            StateSpec::Oat { total, theta } => Ok(one_axis_twist(*total, *theta)),
            StateSpec::OatSweep { .. } => Err(Error::domain(
                "a sweep describes several states; only the bounds command accepts it",
            )),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock { n, total } => write!(f, "fock {n} {total}"),
            StateSpec::Amplitudes(a) => {
                f.write_str("amps")?;
                for z in a {
                    write!(f, " {},{}", z.re, z.im)?;
                }
                Ok(())
            }
            StateSpec::Oat { total, theta } => write!(f, "oat {total} {theta}"),
            StateSpec::OatSweep { total, from, to, points } => {
                write!(f, "oat {total} {from}:{to}:{points}")
            }
        }
    }
}

impl std::str::FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

//! Exact antiderivatives for piecewise polynomial-times-cosine waveforms.
//!
//! Every analytic pulse shape except the gaussian family reduces to a sum of
//! terms `P(u) * cos(omega*u + phase)` on intervals, with `u` measured from the
//! interval start. Such terms are closed under antidifferentiation, so the
//! first and second running integrals of the field (momentum transfer and
//! displacement) come out in closed form, to machine precision.

/// Oscillatory factor `cos(omega*u + phase)` with `omega > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Osc {
    pub omega: f64,
    pub phase: f64,
}

/// One additive term `P(u) * cos(omega*u + phase)`, or a bare polynomial when
/// `osc` is `None`. Coefficients are stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeffs: Vec<f64>,
    pub osc: Option<Osc>,
}

impl Term {
    pub fn poly(coeffs: Vec<f64>) -> Self {
        Term { coeffs, osc: None }
    }

    pub fn osc(coeffs: Vec<f64>, omega: f64, phase: f64) -> Self {
        debug_assert!(omega > 0.0);
        Term {
            coeffs,
            osc: Some(Osc { omega, phase }),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let p = eval_poly(&self.coeffs, u);
        match self.osc {
            None => p,
            Some(Osc { omega, phase }) => p * (omega * u + phase).cos(),
        }
    }

    /// Multiply by `cos(omega*t + phase)` where `t = u + offset` and the term
    /// lives in the local coordinate `u`. Product-to-sum keeps the algebra
    /// closed; a zero-frequency cosine collapses into the polynomial part.
    pub fn modulate(&self, omega: f64, phase: f64, offset: f64) -> Vec<Term> {
        let local_phase = phase + omega * offset;
        match self.osc {
            None => vec![Term::osc(self.coeffs.clone(), omega, local_phase)],
            Some(Osc {
                omega: w0,
                phase: p0,
            }) => {
                let half: Vec<f64> = self.coeffs.iter().map(|c| 0.5 * c).collect();
                let mut out = Vec::with_capacity(2);
                out.push(make_cos_term(half.clone(), w0 + omega, p0 + local_phase));
                out.push(make_cos_term(half, w0 - omega, p0 - local_phase));
                out
            }
        }
    }
}

/// Build `P(u)cos(w u + phi)` normalizing the sign of `w`; `w == 0` folds the
/// constant cosine into the polynomial.
fn make_cos_term(coeffs: Vec<f64>, w: f64, phi: f64) -> Term {
    if w == 0.0 {
        let c = phi.cos();
        Term::poly(coeffs.into_iter().map(|a| a * c).collect())
    } else if w < 0.0 {
        Term::osc(coeffs, -w, -phi)
    } else {
        Term::osc(coeffs, w, phi)
    }
}

pub fn eval_poly(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn poly_antiderivative(coeffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    out.push(0.0);
    for (k, &c) in coeffs.iter().enumerate() {
        out.push(c / (k + 1) as f64);
    }
    out
}

/// Antidifferentiate a term list in the local coordinate, normalized so the
/// result vanishes at `u = 0`.
pub fn antiderivative(terms: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    let mut const_shift = 0.0;
    for term in terms {
        match term.osc {
            None => out.push(Term::poly(poly_antiderivative(&term.coeffs))),
            Some(Osc { omega, phase }) => {
                // int P cos = A sin + B cos with
                //   A = P/w - P''/w^3 + P''''/w^5 - ...
                //   B = P'/w^2 - P'''/w^4 + ...
                let mut a = vec![0.0; term.coeffs.len()];
                let mut b = vec![0.0; term.coeffs.len().max(1)];
                let mut d = term.coeffs.clone();
                let mut sign = 1.0;
                let mut wpow = omega;
                while !d.is_empty() {
                    for (i, &c) in d.iter().enumerate() {
                        a[i] += sign * c / wpow;
                    }
                    d = poly_derivative(&d);
                    if d.is_empty() {
                        break;
                    }
                    wpow *= omega;
                    for (i, &c) in d.iter().enumerate() {
                        b[i] += sign * c / wpow;
                    }
                    d = poly_derivative(&d);
                    wpow *= omega;
                    sign = -sign;
                }
                // sin(w u + phi) = cos(w u + phi - pi/2)
                const_shift += eval_poly(&a, 0.0) * (phase - std::f64::consts::FRAC_PI_2).cos()
                    + eval_poly(&b, 0.0) * phase.cos();
                out.push(Term::osc(a, omega, phase - std::f64::consts::FRAC_PI_2));
                out.push(Term::osc(b, omega, phase));
            }
        }
    }
    if const_shift != 0.0 {
        out.push(Term::poly(vec![-const_shift]));
    }
    out
}

pub fn eval_terms(terms: &[Term], u: f64) -> f64 {
    terms.iter().map(|t| t.eval(u)).sum()
}

/// A waveform split into contiguous intervals, each carrying its own term
/// list in local coordinates, with precomputed running integrals at the
/// interval starts.
#[derive(Debug, Clone)]
pub struct PieceTable {
    starts: Vec<f64>,
    ends: Vec<f64>,
    value_terms: Vec<Vec<Term>>,
    b0_terms: Vec<Vec<Term>>,
    c0_terms: Vec<Vec<Term>>,
    b0_at: Vec<f64>,
    c0_at: Vec<f64>,
    total: f64,
}

impl PieceTable {
    pub fn new(pieces: Vec<(f64, f64, Vec<Term>)>) -> Self {
        let n = pieces.len();
        let mut starts = Vec::with_capacity(n);
        let mut ends = Vec::with_capacity(n);
        let mut value_terms = Vec::with_capacity(n);
        let mut b0_terms = Vec::with_capacity(n);
        let mut c0_terms = Vec::with_capacity(n);
        let mut b0_at = Vec::with_capacity(n);
        let mut c0_at = Vec::with_capacity(n);
        let mut b0 = 0.0;
        let mut c0 = 0.0;
        let mut total = 0.0;
        let mut prev_end: Option<f64> = None;
        for (start, end, terms) in pieces {
            debug_assert!(end > start);
            if let Some(pe) = prev_end {
                debug_assert!(start >= pe - 1e-9 * end.abs().max(1.0));
                // field-free gap: momentum transfer is flat, displacement drifts
                c0 += b0 * (start - pe).max(0.0);
            }
            prev_end = Some(end);
            let b_terms = antiderivative(&terms);
            // fold the incoming running integral into the displacement terms
            let mut b_full = b_terms.clone();
            b_full.push(Term::poly(vec![b0]));
            let c_terms = antiderivative(&b_full);
            starts.push(start);
            ends.push(end);
            b0_at.push(b0);
            c0_at.push(c0);
            let h = end - start;
            b0 += eval_terms(&b_terms, h);
            c0 += eval_terms(&c_terms, h);
            value_terms.push(terms);
            b0_terms.push(b_terms);
            c0_terms.push(c_terms);
            total = end;
        }
        PieceTable {
            starts,
            ends,
            value_terms,
            b0_terms,
            c0_terms,
            b0_at,
            c0_at,
            total,
        }
    }

    fn locate(&self, t: f64) -> usize {
        match self
            .starts
            .binary_search_by(|s| s.partial_cmp(&t).expect("finite"))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if t < self.starts[0] || t > self.total {
            return 0.0;
        }
        let i = self.locate(t);
        if t > self.ends[i] {
            return 0.0; // gap between pieces
        }
        eval_terms(&self.value_terms[i], t - self.starts[i])
    }

    pub fn b0(&self, t: f64) -> f64 {
        if t <= self.starts[0] {
            return 0.0;
        }
        if t >= self.total {
            let i = self.starts.len() - 1;
            return self.b0_at[i] + eval_terms(&self.b0_terms[i], self.ends[i] - self.starts[i]);
        }
        let i = self.locate(t);
        let u = (t - self.starts[i]).min(self.ends[i] - self.starts[i]);
        self.b0_at[i] + eval_terms(&self.b0_terms[i], u)
    }

    pub fn c0(&self, t: f64) -> f64 {
        if t <= self.starts[0] {
            return 0.0;
        }
        let i = if t >= self.total {
            self.starts.len() - 1
        } else {
            self.locate(t)
        };
        let h = self.ends[i] - self.starts[i];
        let u = (t - self.starts[i]).min(h);
        let mut c = self.c0_at[i] + eval_terms(&self.c0_terms[i], u);
        if t > self.ends[i] {
            let b_end = self.b0_at[i] + eval_terms(&self.b0_terms[i], h);
            c += b_end * (t - self.ends[i]);
        }
        c
    }
}

use super::ComplexValue;

/// Neumaier compensated summation, applied independently to the real and
/// imaginary parts.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    re_comp: f64,
    im: f64,
    im_comp: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, z: ComplexValue) {
        neumaier(&mut self.re, &mut self.re_comp, z.re);
        neumaier(&mut self.im, &mut self.im_comp, z.im);
    }

    pub(crate) fn value(&self) -> ComplexValue {
        ComplexValue::new(self.re + self.re_comp, self.im + self.im_comp)
    }
}

/// Running series with the stopping rule: three consecutive terms each
/// smaller than `1e-16·|partial sum|`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Series {
    sum: CompensatedSum,
    quiet: u32,
    terms: usize,
}

impl Series {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Adds a term and reports whether the series has converged.
    pub(crate) fn push(&mut self, term: ComplexValue) -> bool {
        self.sum.add(term);
        self.terms += 1;
        let total = self.sum.value().norm();
        if term.norm() <= 1e-16 * total || (term.norm() == 0.0 && total == 0.0) {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= 3
    }

    pub(crate) fn value(&self) -> ComplexValue {
        self.sum.value()
    }

    #[cfg(test)]
    pub(crate) fn terms(&self) -> usize {
        self.terms
    }
}

//! Shared pieces of the JSON wire formats.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub(crate) struct ComplexWire {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexWire {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexWire> for C64 {
    fn from(w: ComplexWire) -> Self {
        C64::new(w.re, w.im)
    }
}

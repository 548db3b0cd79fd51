//! Free Dirac operator D⁰(p) = α·p + β in the standard representation and the
//! unitary rotating it to √(1+|p|²) β.

use nalgebra::{Matrix4, Vector4};

use crate::linalg::{c, C64, I};

pub type Mat4 = Matrix4<C64>;
pub type Spinor = Vector4<C64>;

pub fn beta() -> Mat4 {
    Mat4::from_diagonal(&Vector4::new(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)))
}

/// α_k = [[0, σ_k], [σ_k, 0]].
pub fn alpha(k: usize) -> Mat4 {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let sigma = match k {
        0 => [[z, o], [o, z]],
        1 => [[z, -I], [I, z]],
        2 => [[o, z], [z, -o]],
        _ => panic!("alpha index {k} out of range"),
    };
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j + 2)] = sigma[i][j];
            m[(i + 2, j)] = sigma[i][j];
        }
    }
    m
}

pub fn alpha_dot(p: [f64; 3]) -> Mat4 {
    alpha(0) * c(p[0], 0.0) + alpha(1) * c(p[1], 0.0) + alpha(2) * c(p[2], 0.0)
}

pub fn dirac_free(p: [f64; 3]) -> Mat4 {
    alpha_dot(p) + beta()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinorFrame {
    pub u: Mat4,
    /// Positive-energy spinor: D⁰(p) x = √(1+|p|²) x.
    pub x: Spinor,
}

/// U(p) = a₊ + a₋ β(α·p)/|p| with a± = √((1 ± 1/E)/2), E = √(1+|p|²).
///
/// U(p) D⁰(p) U(p)* = E β, and x = U(p)* e₁ = (a₊ − a₋ β(α·p)/|p|) e₁.
pub fn spinor_frame(p: [f64; 3]) -> SpinorFrame {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if norm == 0.0 {
        let mut x = Spinor::zeros();
        x[0] = c(1.0, 0.0);
        return SpinorFrame { u: Mat4::identity(), x };
    }
    let e = (1.0 + norm * norm).sqrt();
    let ap = ((1.0 + 1.0 / e) / 2.0).sqrt();
    let am = ((1.0 - 1.0 / e) / 2.0).sqrt();
    let ba = beta() * alpha_dot(p) * c(1.0 / norm, 0.0);
    let u = Mat4::identity() * c(ap, 0.0) + ba * c(am, 0.0);
    let x = u.adjoint().column(0).into_owned();
    SpinorFrame { u, x }
}

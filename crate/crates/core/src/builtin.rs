//! Named example fields with a distinguished zero.

use nalgebra::{DMatrix, DVector};

use crate::classify::ZeroCase;
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::forms::MetricForm;

/// Registry names, in display order.
pub const BUILTIN_NAMES: &[&str] = &[
    "dilation",
    "killing-block",
    "case-b-cone-22",
    "case-b-null-H-31",
    "surface-2d",
    "odd-codim-null",
    "bipolar",
];

/// Zero lists of the planar example.
pub const SURFACE_XI: &[f64] = &[-1.0, 0.0, 1.0];
pub const SURFACE_XI_PRIME: &[f64] = &[0.0, 2.0];

/// A field with a zero `z` and a sampling box around it.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: ConformalFieldParams,
    pub z: DVector<f64>,
    pub radius: f64,
    pub expected_case: ZeroCase,
}

fn e(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

fn skew(n: usize, i: usize, j: usize, value: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    s[(i, j)] = value;
    s[(j, i)] = -value;
    s
}

fn hyperbolic_pairs(pairs: usize, extra: usize) -> MetricForm {
    let n = 2 * pairs + extra;
    let mut g = DMatrix::zeros(n, n);
    for k in 0..pairs {
        g[(2 * k, 2 * k + 1)] = 1.0;
        g[(2 * k + 1, 2 * k)] = 1.0;
    }
    for k in 2 * pairs..n {
        g[(k, k)] = 1.0;
    }
    MetricForm::new(g).expect("symmetric")
}

/// Looks up a registry entry. `surface-2d` is planar and has no
/// `ConformalFieldParams`; use [`SURFACE_XI`] and [`SURFACE_XI_PRIME`].
pub fn builtin(name: &str) -> Result<Builtin> {
    let b = match name {
        "dilation" => Builtin {
            name: "dilation",
            summary: "v = x on signature (2,1); isolated zero with phi = 2",
            params: ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))?.with_c(1.0)?,
            z: DVector::zeros(3),
            radius: 1.0,
            expected_case: ZeroCase::III,
        },
        "killing-block" => Builtin {
            name: "killing-block",
            summary: "rotation in the (e2,e3) plane of signature (2,1); zero line span(e1)",
            params: ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))?.with_s(skew(3, 1, 2, 1.0))?,
            z: DVector::zeros(3),
            radius: 1.0,
            expected_case: ZeroCase::I,
        },
        "case-b-cone-22" => Builtin {
            name: "case-b-cone-22",
            summary: "u = e1 on signature (2,2); zero set is the null cone of span(e2,e3,e4)",
            params: ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))?.with_u(e(4, 0))?,
            z: DVector::zeros(4),
            radius: 1.0,
            expected_case: ZeroCase::II,
        },
        "case-b-null-H-31" => Builtin {
            name: "case-b-null-H-31",
            summary: "u = l1 plus a rotation on signature (3,1); zero set is the null line span(l1)",
            params: ConformalFieldParams::zero(hyperbolic_pairs(1, 2))?
                .with_s(skew(4, 3, 2, 1.0))?
                .with_u(e(4, 0))?,
            z: DVector::zeros(4),
            radius: 1.0,
            expected_case: ZeroCase::III,
        },
        "odd-codim-null" => Builtin {
            name: "odd-codim-null",
            summary: "u = l1 plus a boost of (l2,m2) on signature (2,2); null zero line of codimension 3",
            params: ConformalFieldParams::zero(hyperbolic_pairs(2, 0))?
                .with_s(skew(4, 3, 2, 1.0))?
                .with_u(e(4, 0))?,
            z: DVector::zeros(4),
            radius: 1.0,
            expected_case: ZeroCase::III,
        },
        "bipolar" => Builtin {
            name: "bipolar",
            summary: "w = -e1, u = e1 on Euclidean 3-space; zeros at +-e1 with phi = +-4",
            params: ConformalFieldParams::zero(MetricForm::diagonal(&[1.0, 1.0, 1.0]))?
                .with_w(-e(3, 0))?
                .with_u(e(3, 0))?,
            z: e(3, 0),
            radius: 0.5,
            expected_case: ZeroCase::III,
        },
        "surface-2d" => {
            return Err(Error::InvalidArgument(
                "surface-2d is planar; use the surface counterexample entry points".into(),
            ))
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown example '{other}'; available: {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(b)
}

#![allow(clippy::excessive_precision)]

//! Globally adaptive Gauss–Kronrod (7, 15) quadrature for complex
//! integrands on finite intervals.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default subdivision budget.
pub const MAX_SEGMENTS: usize = 20_000;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    /// Sum of the per-segment `|K15 - G7|` estimates.
    pub error: f64,
    pub segments: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> Result<Complex64>, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    })
}

/// Integrate `f` over `[a, b]` until the estimated error is below
/// `max(abs_tol, rel_tol · |I|)`.
pub fn integrate(
    mut f: impl FnMut(f64) -> Result<Complex64>,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!(
            "bad integration interval [{a}, {b}]"
        )));
    }
    let mut segments = vec![gk15(&mut f, a, b)?];
    loop {
        let value: Complex64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol.max(rel_tol * value.norm()) {
            return Ok(Quadrature {
                value,
                error,
                segments: segments.len(),
            });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::NoConvergence(MAX_SEGMENTS));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(s.a < mid && mid < s.b) {
            return Err(Error::NoConvergence(segments.len()));
        }
        segments.push(gk15(&mut f, s.a, mid)?);
        segments.push(gk15(&mut f, mid, s.b)?);
    }
}

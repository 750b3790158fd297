#![allow(dead_code)]

use std::f64::consts::PI;

use divspec::aperture::{Aperture, CurvePiece};
use divspec::pas::PasModel;

pub struct Case {
    pub name: String,
    pub aperture: Aperture,
    pub pas: PasModel,
}

pub fn pas_models() -> Vec<(&'static str, PasModel)> {
    // two lobes of different height plus a weak floor
    let table = [(-PI, 0.05), (-1.0, 0.6), (-0.4, 0.05), (0.8, 1.0), (1.3, 0.05)];
    vec![
        ("uniform90@30", PasModel::uniform(PI / 2.0, PI / 6.0).unwrap()),
        ("vonmises5@-60", PasModel::von_mises(5.0, -PI / 3.0).unwrap()),
        ("tabulated", PasModel::tabulated(&table, 0.2).unwrap()),
    ]
}

pub fn apertures() -> Vec<(&'static str, Aperture)> {
    vec![
        ("segment", Aperture::segment(1.2, 0.3, [0.4, -0.1]).unwrap()),
        ("circle", Aperture::circle(0.8).unwrap()),
        ("disk", Aperture::disk(0.6).unwrap()),
        ("rectangle", Aperture::rectangle(1.0, 0.5, [0.0, 0.0], 0.4).unwrap()),
        (
            "piecewise_curve",
            Aperture::piecewise_curve(vec![
                CurvePiece::Line { from: [-0.5, 0.0], to: [0.5, 0.0] },
                CurvePiece::Arc { center: [0.5, 0.3], radius: 0.3, start: -PI / 2.0, end: PI / 2.0 },
            ])
            .unwrap(),
        ),
        ("parallel_lines", Aperture::parallel_lines(4, 1.0, 1.0, 0.0, [0.0, 0.0]).unwrap()),
        (
            "discrete_array",
            Aperture::discrete_array(vec![[0.0, 0.0], [0.5, 0.0], [0.25, 0.4], [-0.3, 0.6], [0.9, 0.2]]).unwrap(),
        ),
    ]
}

/// Every aperture kind against every PAS model.
pub fn regression_suite() -> Vec<Case> {
    let mut out = Vec::new();
    for (an, a) in apertures() {
        for (pn, p) in pas_models() {
            out.push(Case { name: format!("{an}/{pn}"), aperture: a.clone(), pas: p.clone() });
        }
    }
    out
}

pub struct Solved {
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    /// `trace(G_N)` for continuous apertures; 1 for discrete arrays, whose
    /// normalized correlation matrix has unit trace by construction.
    pub gram_trace: f64,
    pub hs_norm_sq: f64,
    pub omega: f64,
    pub n: usize,
    pub n_d: usize,
    pub rho_max: f64,
}

pub fn solve_case(case: &Case, n: Option<usize>) -> divspec::Result<Solved> {
    use divspec::operator::{build_truncated_operator, OperatorOptions};
    use divspec::specfun::truncation_order;
    use divspec::spectrum::{
        discrete_correlation, discrete_spectrum, diversity_measure_of, max_pairwise_distance, solve_spectrum,
    };

    if let Aperture::DiscreteArray { positions } = &case.aperture {
        let n_d = truncation_order(max_pairwise_distance(positions));
        let n = n.unwrap_or(n_d + 10);
        let r = discrete_correlation(positions, &case.pas, n)?;
        let eigenvalues = discrete_spectrum(&r)?;
        return Ok(Solved {
            trace: eigenvalues.iter().sum(),
            gram_trace: 1.0,
            hs_norm_sq: eigenvalues.iter().map(|l| l * l).sum(),
            omega: diversity_measure_of(&eigenvalues)?,
            n,
            n_d,
            rho_max: case.pas.rho_max(),
            eigenvalues,
        });
    }
    let op = build_truncated_operator(&case.aperture, &case.pas, OperatorOptions { n, ..Default::default() })?;
    let s = solve_spectrum(&op)?;
    Ok(Solved {
        trace: s.trace,
        gram_trace: s.gram_trace,
        hs_norm_sq: s.hs_norm_sq,
        omega: s.omega,
        n: s.n,
        n_d: s.n_d,
        rho_max: s.rho_max,
        eigenvalues: s.eigenvalues,
    })
}

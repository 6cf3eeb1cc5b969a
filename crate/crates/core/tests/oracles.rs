//! Values frozen from an independent brute-force evaluation (dense lattices
//! and closed forms computed outside this crate).

use wakexp::dsbs::{dsbs_exponent, dsbs_source};
use wakexp::probkit::{binary_entropy, binary_kl, conditional_entropy, entropy, JointPmf2, Pmf};
use wakexp::reductions::{exponent_ne, gap_check, oohama_single, s_theta, ThetaGrid};
use wakexp::wak::{region_min_r1, wak_exponent};
use wakexp::{RatePair, SolverConfig};

/// Region boundary of DSBS(0.1) at R2 = 1 − h(0.2) from a 201×201 lattice of
/// binary test channels; equals h(0.26).
const REGION_AT_H02: f64 = 0.8267463724926176;
/// No-encoding exponent of DSBS(0.1) at R1 = 0.2: lattice of resolution 200
/// on the joint simplex, and a 200 001-point scan of symmetric joints.
const NE_LATTICE_200: f64 = 0.052708985656743125;
const NE_SYMMETRIC_SCAN: f64 = 0.05066542415244121;
/// Binary-auxiliary program for DSBS(0.1) at R2 = 1 − h(0.2): lattice minima
/// with 1201 points per coordinate (8001 for the two-parameter family).
const DSBS_R1_05_LATTICE_1201: f64 = 0.22197975464826591;
const DSBS_MARKOV_R1_05_LATTICE_8001: f64 = 0.34644428391971693;
const DSBS_R1_02_LATTICE_1201: f64 = 0.5219574554761242;

#[test]
fn closed_form_measures() {
    assert!((entropy(&Pmf::new(vec![0.2, 0.8]).unwrap()) - 0.7219280948873623).abs() < 1e-15);
    assert!((binary_entropy(0.1) - 0.4689955935892812).abs() < 1e-15);
    assert!((binary_kl(0.2, 0.1) - 0.06405999884615018).abs() < 1e-15);
    let src = dsbs_source(0.1).unwrap();
    assert!((conditional_entropy(&src) - 0.4689955935892812).abs() < 1e-15);
    let p = Pmf::new(vec![0.9, 0.1]).unwrap();
    assert!((s_theta(&p, -1.0) + 0.2863041851566411).abs() < 1e-15);
}

#[test]
fn region_boundary_matches_lattice() {
    let src = dsbs_source(0.1).unwrap();
    let v = region_min_r1(&src, 1.0 - binary_entropy(0.2), &SolverConfig::default()).unwrap();
    assert!((v - REGION_AT_H02).abs() < 1e-4, "{v}");
    assert!(v >= REGION_AT_H02 - 1e-9, "below the exact optimum: {v}");
}

#[test]
fn uncoded_exponent_matches_lattice() {
    let src = dsbs_source(0.1).unwrap();
    let v = exponent_ne(&src, 0.2, &SolverConfig::default()).unwrap();
    assert!(v <= NE_LATTICE_200 + 1e-12);
    assert!((v - NE_SYMMETRIC_SCAN).abs() < 1e-5, "{v}");
    let w = wak_exponent(&src, RatePair::new(0.2, 2.0).unwrap(), &SolverConfig::default(), 6).unwrap();
    assert!((w.value - v).abs() < 1e-5, "{} vs {v}", w.value);
}

#[test]
fn independent_uniform_bits() {
    let u = Pmf::uniform(2);
    let src = JointPmf2::product(&u, &u);
    let cfg = SolverConfig::default().with_starts(32);
    assert!((exponent_ne(&src, 0.5, &cfg).unwrap() - 0.5).abs() < 1e-6);
    let w = wak_exponent(&src, RatePair::new(0.5, 3.0).unwrap(), &cfg, 4).unwrap();
    assert!((w.value - 0.5).abs() < 1e-4, "{}", w.value);
}

#[test]
fn oohama_single_user_anchors() {
    let p = Pmf::new(vec![0.9, 0.1]).unwrap();
    let o = oohama_single(&p, 0.0, &ThetaGrid::standard()).unwrap();
    assert_eq!(o.theta, -1.0);
    assert!((o.value - 0.09543472838554697).abs() < 1e-12);
    let g = gap_check(&p, 0.0).unwrap();
    assert!((g.gap - 0.05656836505950298).abs() < 1e-4);
}

#[test]
fn binary_auxiliary_bound_matches_dense_lattice() {
    // Minima of the same program enumerated on dense lattices; the refined
    // search must land at or below them, and within lattice error.
    let r2 = 1.0 - binary_entropy(0.2);
    for (r1, markov, oracle) in [
        (0.5, false, DSBS_R1_05_LATTICE_1201),
        (0.5, true, DSBS_MARKOV_R1_05_LATTICE_8001),
        (0.2, false, DSBS_R1_02_LATTICE_1201),
    ] {
        let (fast, _) = dsbs_exponent(0.1, r1, r2, markov, &SolverConfig::default()).unwrap();
        assert!(fast <= oracle + 1e-9, "{r1} {markov}: {fast} > {oracle}");
        assert!(oracle - fast < 1e-3, "{r1} {markov}: {fast} vs {oracle}");
    }
}

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weil_charge::bundle::{propagate_transition, TransitionOutcome};
use weil_charge::census::{angle_step, run_census};
use weil_charge::fields::SectionField;
use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::geom::{self, solid_angle};
use weil_charge::identity::total_flux;
use weil_charge::mesh::SurfaceMesh;

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r = geom::norm(p);
        if r > 0.1 && r < 1.0 {
            return geom::scale(p, 1.0 / r);
        }
    }
}

/// Spherical excess from the side lengths (L'Huilier).
fn lhuilier(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let arc = |u: [f64; 3], v: [f64; 3]| geom::dot(u, v).clamp(-1.0, 1.0).acos();
    let (x, y, z) = (arc(b, c), arc(c, a), arc(a, b));
    let s = 0.5 * (x + y + z);
    let t = (0.5 * s).tan() * (0.5 * (s - x)).tan() * (0.5 * (s - y)).tan() * (0.5 * (s - z)).tan();
    4.0 * t.max(0.0).sqrt().atan()
}

#[test]
fn solid_angle_matches_lhuilier() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let (a, b, c) = (random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng));
        let orient = geom::dot(a, geom::cross(b, c)).signum();
        let want = orient * lhuilier(a, b, c);
        let got = solid_angle(a, b, c);
        assert!((got - want).abs() < 1e-8 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

#[test]
fn monopole_flux_is_lhuilier_area() {
    for k in [1, 3] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::MonopoleSphere, 12, k)).unwrap();
        let m = &inst.mesh;
        let area: f64 = m
            .faces()
            .iter()
            .map(|&[a, b, c]| lhuilier(m.position(a), m.position(b), m.position(c)))
            .sum();
        let flux = total_flux(m, inst.twoform.as_ref().unwrap()).unwrap();
        assert!((area - 4.0 * PI).abs() < 1e-9);
        assert!((flux - 0.5 * k as f64 * area).abs() < 1e-9);
    }
}

#[test]
fn angle_step_is_signed_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let a = rng.gen_range(-PI..PI);
        let d = rng.gen_range(-3.1..3.1);
        let step = angle_step([a.cos(), a.sin()], [(a + d).cos(), (a + d).sin()]);
        assert!((step - d).abs() < 1e-12, "{step} vs {d}");
    }
}

/// Transition between the north and south monopole potentials is
/// exp(i q phi) up to a constant, with phi the azimuth.
#[test]
fn monopole_transition_closed_form() {
    for k in [1, 2, -1] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::MonopoleSphere, 16, k)).unwrap();
        let t = match propagate_transition(&inst.mesh, inst.atlas.as_ref().unwrap()).unwrap() {
            TransitionOutcome::SingleValued(t) => t,
            TransitionOutcome::Obstruction(o) => panic!("{o:?}"),
        };
        let az = |v: usize| {
            let p = inst.mesh.position(v);
            p[1].atan2(p[0])
        };
        let r = t.reference_vertex;
        for (&v, &c) in &t.values {
            let want = t.reference_value * Complex64::from_polar(1.0, (k as f64) * (az(v) - az(r)));
            assert!((c - want).norm() < 1e-10, "k={k} v={v}: {c} vs {want}");
        }
    }
}

#[test]
fn disk_vortices_sit_in_the_faces_containing_the_zeros() {
    let inst = generate(&GeneratorSpec::new(GeneratorKind::DiskVortex, 32, 3)).unwrap();
    let census = run_census(&inst.mesh, inst.section.as_ref().unwrap()).unwrap();
    assert_eq!(census.total_charge, 3);
    assert_eq!(census.vortices.len(), 3);
    for v in &census.vortices {
        let psi = inst.section.as_ref().unwrap().values();
        let near = inst.mesh.face(v.face).iter().map(|&u| psi[u].norm()).fold(f64::INFINITY, f64::min);
        let far = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(near < 0.5 * far);
        assert_eq!((v.winding, v.hopf_index, v.brouwer_degree), (1, 1, 1));
    }
}

#[test]
fn linear_field_on_square_counts_one_negative_vortex() {
    // psi = conj(z - z0): degree -1 at z0
    let p = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
    let mesh = SurfaceMesh::build(p, vec![[0, 1, 2], [0, 2, 3]], []).unwrap();
    let z0 = Complex64::new(0.7, 0.2);
    let section = SectionField::from_fn(&mesh, |_, x| (Complex64::new(x[0], x[1]) - z0).conj());
    let census = run_census(&mesh, &section).unwrap();
    assert_eq!(census.total_charge, -1);
    assert_eq!(census.vortices.len(), 1);
    assert_eq!(census.vortices[0].face, 0);
    assert_eq!(census.vortices[0].brouwer_degree, -1);
}

#[test]
fn torus_flux_per_cell_is_uniform() {
    let inst = generate(&GeneratorSpec::new(GeneratorKind::FluxTorus, 6, 2)).unwrap();
    let omega = inst.twoform.as_ref().unwrap().values();
    let per_face = TAU * 2.0 / omega.len() as f64;
    for w in &omega[..omega.len() - 1] {
        assert!((w - per_face).abs() < 1e-15);
    }
}

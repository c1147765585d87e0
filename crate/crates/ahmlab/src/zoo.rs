//! Built-in example structures with known classifications, plus a seeded
//! random generator of generic almost Hermitian structures.
//!
//! Every entry is chart-local: the chart covers the safe sampling region
//! with enough margin for nested finite-difference stencils. Expected labels
//! are not assumed anywhere — the classification tests reproduce them from
//! torsion residuals.

use nalgebra::DVector;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::{Chart, CVec, Domain, Point};
use crate::classify::Label;
use crate::error::{GeomError, Result};
use crate::frame::UnitaryFrame;
use crate::structure::{standard_j, AlmostHermitian, RMat};

/// A named example structure with its expected classification and a safe
/// sampling region.
pub struct ZooEntry {
    pub name: String,
    pub structure: AlmostHermitian,
    pub expected_labels: Vec<Label>,
    pub sample_lo: Vec<f64>,
    pub sample_hi: Vec<f64>,
    /// Construction notes shown by the CLI.
    pub notes: String,
    /// Frame seed override; `None` means the standard coordinate seeds.
    pub seed_basis: Option<Vec<CVec>>,
}

impl ZooEntry {
    /// Unitary frame field for this entry.
    pub fn frame(&self) -> UnitaryFrame {
        match &self.seed_basis {
            Some(seeds) => UnitaryFrame::from_seeds(self.structure.clone(), seeds.clone()),
            None => UnitaryFrame::standard(self.structure.clone()),
        }
    }

    /// Deterministic sample points in the safe region.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.structure.dim();
        let dist: Vec<Uniform<f64>> = (0..dim)
            .map(|a| Uniform::new(self.sample_lo[a], self.sample_hi[a]))
            .collect();
        (0..count)
            .map(|_| DVector::from_iterator(dim, (0..dim).map(|a| dist[a].sample(&mut rng))))
            .collect()
    }
}

/// Flat C^n with the standard structure on a box.
pub fn flat_cn(n: usize) -> Result<ZooEntry> {
    if n == 0 || n > 4 {
        return Err(GeomError::BadParameter(format!(
            "flat_cn requires 1 <= n <= 4, got {n}"
        )));
    }
    let dim = 2 * n;
    let chart = Chart::boxed("flat_cn", dim, vec![-1.0; dim], vec![1.0; dim]);
    let j0 = standard_j(n);
    let structure = AlmostHermitian::new(
        chart,
        move |_: &Point| j0.clone(),
        move |_: &Point| RMat::identity(dim, dim),
    );
    Ok(ZooEntry {
        name: "flat_cn".into(),
        structure,
        expected_labels: Label::all().to_vec(),
        sample_lo: vec![-0.5; dim],
        sample_hi: vec![0.5; dim],
        notes: "Flat C^n: constant J0 and identity metric; every torsion and \
                curvature component vanishes."
            .into(),
        seed_basis: None,
    })
}

/// Round 2-sphere of the given radius in a stereographic chart:
/// g = 4 r^4 / (r^2 + |z|^2)^2 (dx^2 + dy^2), standard J.
pub fn round_s2(radius: f64) -> Result<ZooEntry> {
    if radius <= 0.0 {
        return Err(GeomError::BadParameter(format!(
            "round_s2 requires radius > 0, got {radius}"
        )));
    }
    let chart = Chart::new("round_s2", 2, Domain::All);
    let j0 = standard_j(1);
    let r2 = radius * radius;
    let structure = AlmostHermitian::new(
        chart,
        move |_: &Point| j0.clone(),
        move |p: &Point| {
            let s = r2 + p[0] * p[0] + p[1] * p[1];
            let factor = 4.0 * r2 * r2 / (s * s);
            RMat::identity(2, 2) * factor
        },
    );
    Ok(ZooEntry {
        name: "round_s2".into(),
        structure,
        expected_labels: Label::all().to_vec(),
        sample_lo: vec![-0.7, -0.7],
        sample_hi: vec![0.7, 0.7],
        notes: "Round sphere of radius r in a stereographic chart; Kaehler \
                control case with holomorphic sectional curvature 1/r^2."
            .into(),
        seed_basis: None,
    })
}

/// Fano-plane structure constants of the 7-dimensional cross product:
/// eps = +1 on these oriented triples (0-based labels).
const FANO_TRIPLES: [(usize, usize, usize); 7] = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 6, 5),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 5, 4),
];

/// Octonionic cross product on R^7 (imaginary octonions).
pub fn cross7(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let mut z = DVector::zeros(7);
    for &(a, b, c) in FANO_TRIPLES.iter() {
        z[c] += x[a] * y[b] - x[b] * y[a];
        z[a] += x[b] * y[c] - x[c] * y[b];
        z[b] += x[c] * y[a] - x[a] * y[c];
    }
    z
}

/// Nearly Kaehler six-sphere: unit S^6 in R^7 with J_p(X) = p x X (octonion
/// cross product) and the induced round metric, in graph coordinates over
/// the hemisphere x_7 > 0.
pub fn s6_nearly_kahler() -> Result<ZooEntry> {
    let chart = Chart::new("s6_nearly_kahler", 6, Domain::Ball { radius: 0.9 });

    // Embedding: u in B^6 -> (u, w) with w = sqrt(1 - |u|^2).
    // Tangent basis in the chart: E_a = e_a - (u_a / w) e_7.
    let embed = |u: &Point| -> (DVector<f64>, f64) {
        let w = (1.0 - u.norm_squared()).sqrt();
        let mut p = DVector::zeros(7);
        for a in 0..6 {
            p[a] = u[a];
        }
        p[6] = w;
        (p, w)
    };

    let g = move |u: &Point| -> RMat {
        let w2 = 1.0 - u.norm_squared();
        let mut m = RMat::identity(6, 6);
        for a in 0..6 {
            for b in 0..6 {
                m[(a, b)] += u[a] * u[b] / w2;
            }
        }
        m
    };

    let j = move |u: &Point| -> RMat {
        let (p, w) = embed(u);
        let mut m = RMat::zeros(6, 6);
        for a in 0..6 {
            // E_a in R^7
            let mut ea = DVector::zeros(7);
            ea[a] = 1.0;
            ea[6] = -u[a] / w;
            let v = cross7(&p, &ea);
            // v is tangent: chart components are its first six entries.
            for b in 0..6 {
                m[(b, a)] = v[b];
            }
        }
        m
    };

    let structure = AlmostHermitian::new(chart, j, g);
    Ok(ZooEntry {
        name: "s6_nearly_kahler".into(),
        structure,
        expected_labels: vec![Label::Quasi, Label::Nearly],
        sample_lo: vec![-0.16; 6],
        sample_hi: vec![0.16; 6],
        notes: "Unit six-sphere with the octonionic almost complex structure \
                J_p(X) = p x X and the induced round metric, in hemisphere \
                graph coordinates; strictly nearly Kaehler."
            .into(),
        seed_basis: None,
    })
}

/// Hopf surface chart: annulus in C^2 minus the origin with g = |z|^{-2} delta
/// and the standard integrable J.
pub fn hopf_surface() -> Result<ZooEntry> {
    let chart = Chart::new(
        "hopf_surface",
        4,
        Domain::Shell {
            inner: 0.5,
            outer: 2.0,
        },
    );
    let j0 = standard_j(2);
    let structure = AlmostHermitian::new(
        chart,
        move |_: &Point| j0.clone(),
        move |p: &Point| {
            let z2 = p.norm_squared();
            RMat::identity(4, 4) / z2
        },
    );
    Ok(ZooEntry {
        name: "hopf_surface".into(),
        structure,
        expected_labels: vec![Label::Hermitian],
        sample_lo: vec![0.4; 4],
        sample_hi: vec![0.7; 4],
        notes: "Standard Hopf metric |z|^{-2} delta on an annulus in C^2 \\ {0} \
                with constant integrable J; Hermitian, not quasi-Kaehler."
            .into(),
        seed_basis: None,
    })
}

/// Matrix exponential by scaling-and-squaring with a Taylor tail.
pub fn expm(m: &RMat) -> RMat {
    let dim = m.nrows();
    let norm = m.iter().fold(0.0f64, |a, x| a.max(x.abs())) * dim as f64;
    let scalings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let t = m / (2.0f64.powi(scalings as i32));
    let mut term = RMat::identity(dim, dim);
    let mut acc = RMat::identity(dim, dim);
    for k in 1..=24 {
        term = (&term * &t) / (k as f64);
        acc += &term;
        if term.iter().fold(0.0f64, |a, x| a.max(x.abs())) < 1e-18 {
            break;
        }
    }
    for _ in 0..scalings {
        acc = &acc * &acc;
    }
    acc
}

/// Seeded generic almost Hermitian structure on the 2n-torus:
/// J = A J0 A^{-1} with A = exp(amplitude * M(p)) for a trigonometric matrix
/// field M, and g obtained from a perturbed flat metric h by averaging,
/// g(X,Y) = (h(X,Y) + h(JX,JY)) / 2, so compatibility is exact.
pub fn random_torus(n: usize, seed: u64, amplitude: f64) -> Result<ZooEntry> {
    if n == 0 || n > 3 {
        return Err(GeomError::BadParameter(format!(
            "random_torus requires 1 <= n <= 3, got {n}"
        )));
    }
    if !(amplitude > 0.0 && amplitude <= 0.2) {
        return Err(GeomError::BadParameter(format!(
            "random_torus requires amplitude in (0, 0.2], got {amplitude}"
        )));
    }
    let dim = 2 * n;
    let chart = Chart::new("random_torus", dim, Domain::All);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uni = Uniform::new(-1.0f64, 1.0);
    let mut draw_coeffs = |count: usize| -> Vec<f64> {
        (0..count).map(|_| uni.sample(&mut rng)).collect()
    };

    // Trigonometric matrix field with entries bounded by 1/(2n) so that the
    // operator norm stays below 1 and h stays positive definite.
    let trig_field = |c0: Vec<f64>, ca: Vec<f64>, cb: Vec<f64>, dim: usize| {
        move |p: &Point| -> RMat {
            let scale = 1.0 / ((1 + 2 * dim) as f64 * dim as f64);
            let mut m = RMat::zeros(dim, dim);
            for a in 0..dim {
                for b in 0..dim {
                    let mut v = c0[a * dim + b];
                    for c in 0..dim {
                        v += ca[(a * dim + b) * dim + c] * p[c].sin();
                        v += cb[(a * dim + b) * dim + c] * p[c].cos();
                    }
                    m[(a, b)] = v * scale;
                }
            }
            m
        }
    };

    let m_field = trig_field(
        draw_coeffs(dim * dim),
        draw_coeffs(dim * dim * dim),
        draw_coeffs(dim * dim * dim),
        dim,
    );
    let s_field_raw = trig_field(
        draw_coeffs(dim * dim),
        draw_coeffs(dim * dim * dim),
        draw_coeffs(dim * dim * dim),
        dim,
    );

    let j0 = standard_j(n);
    let amp = amplitude;
    let j0c = j0.clone();
    let m_field_j = m_field;
    let j_fn = move |p: &Point| -> RMat {
        let m = m_field_j(p) * amp;
        let a = expm(&m);
        let a_inv = expm(&(-&m));
        &a * &j0c * a_inv
    };
    let j_for_g = j_fn.clone();
    let g_fn = move |p: &Point| -> RMat {
        let s = s_field_raw(p);
        let sym = (&s + s.transpose()) * 0.5;
        let h = RMat::identity(dim, dim) + sym * amp;
        let j = j_for_g(p);
        (&h + j.transpose() * &h * &j) * 0.5
    };

    let structure = AlmostHermitian::new(chart, j_fn, g_fn);
    Ok(ZooEntry {
        name: "random_torus".into(),
        structure,
        expected_labels: vec![],
        sample_lo: vec![0.0; dim],
        sample_hi: vec![std::f64::consts::TAU; dim],
        notes: "Generic almost Hermitian structure: J conjugated by a seeded \
                trigonometric exponential, metric averaged to exact \
                compatibility; no special class."
            .into(),
        seed_basis: None,
    })
}

/// Parameter schema entry for the CLI listing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ZooParam {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: String,
}

/// Names, expected labels and parameter schemas of all entries.
pub fn zoo_catalog() -> Vec<(&'static str, Vec<Label>, Vec<ZooParam>)> {
    vec![
        (
            "flat_cn",
            Label::all().to_vec(),
            vec![ZooParam {
                name: "n",
                kind: "integer 1..=4",
                default: "2".into(),
            }],
        ),
        (
            "round_s2",
            Label::all().to_vec(),
            vec![ZooParam {
                name: "radius",
                kind: "positive real",
                default: "1.0".into(),
            }],
        ),
        ("s6_nearly_kahler", vec![Label::Quasi, Label::Nearly], vec![]),
        ("hopf_surface", vec![Label::Hermitian], vec![]),
        (
            "random_torus",
            vec![],
            vec![
                ZooParam {
                    name: "n",
                    kind: "integer 1..=3",
                    default: "2".into(),
                },
                ZooParam {
                    name: "seed",
                    kind: "integer",
                    default: "0".into(),
                },
                ZooParam {
                    name: "amplitude",
                    kind: "real in (0, 0.2]",
                    default: "0.1".into(),
                },
            ],
        ),
    ]
}

/// Build a zoo entry by name with the given parameters.
pub fn by_name(name: &str, n: usize, radius: f64, seed: u64, amplitude: f64) -> Result<ZooEntry> {
    match name {
        "flat_cn" => flat_cn(n),
        "round_s2" => round_s2(radius),
        "s6_nearly_kahler" => s6_nearly_kahler(),
        "hopf_surface" => hopf_surface(),
        "random_torus" => random_torus(n, seed, amplitude),
        other => Err(GeomError::UnknownManifold(other.to_string())),
    }
}

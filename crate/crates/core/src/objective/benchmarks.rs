//! The 23 classic unimodal (F1–F7) and multimodal (F8–F23) test functions,
//! with the dimensions, domains and budgets they are usually run at.

use std::f64::consts::{E, PI};

use rand::{Rng, RngCore};

use super::{Bounds, Defaults, Direction, ObjectiveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Benchmark {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
    F13,
    F14,
    F15,
    F16,
    F17,
    F18,
    F19,
    F20,
    F21,
    F22,
    F23,
}

use Benchmark::*;

impl Benchmark {
    pub const ALL: [Benchmark; 23] = [
        F1, F2, F3, F4, F5, F6, F7, F8, F9, F10, F11, F12, F13, F14, F15, F16, F17, F18, F19, F20,
        F21, F22, F23,
    ];

    pub fn id(self) -> &'static str {
        match self {
            F1 => "F1",
            F2 => "F2",
            F3 => "F3",
            F4 => "F4",
            F5 => "F5",
            F6 => "F6",
            F7 => "F7",
            F8 => "F8",
            F9 => "F9",
            F10 => "F10",
            F11 => "F11",
            F12 => "F12",
            F13 => "F13",
            F14 => "F14",
            F15 => "F15",
            F16 => "F16",
            F17 => "F17",
            F18 => "F18",
            F19 => "F19",
            F20 => "F20",
            F21 => "F21",
            F22 => "F22",
            F23 => "F23",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            F1 | F2 | F3 | F4 | F5 | F6 | F7 | F8 | F9 | F10 | F11 | F12 | F13 => 30,
            F14 | F16 | F17 | F18 => 2,
            F19 => 3,
            F20 => 6,
            F15 | F21 | F22 | F23 => 4,
        }
    }

    fn domain(self) -> Vec<(f64, f64)> {
        let same = |lo: f64, hi: f64| vec![(lo, hi); self.dimension()];
        match self {
            F1 | F3 | F4 | F6 => same(-100.0, 100.0),
            F2 => same(-10.0, 10.0),
            F5 => same(-30.0, 30.0),
            F7 => same(-1.28, 1.28),
            F8 => same(-500.0, 500.0),
            F9 => same(-5.12, 5.12),
            F10 => same(-32.0, 32.0),
            F11 => same(-600.0, 600.0),
            F12 | F13 => same(-50.0, 50.0),
            F14 => same(-65.53, 65.53),
            F15 | F16 | F18 => same(-5.0, 5.0),
            F17 => vec![(-5.0, 10.0), (0.0, 15.0)],
            F19 | F20 => same(0.0, 1.0),
            F21 | F22 | F23 => same(0.0, 10.0),
        }
    }

    pub fn default_iterations(self) -> usize {
        match self {
            F1 | F2 | F3 | F4 | F5 | F6 | F7 | F8 | F9 | F10 | F11 | F12 | F13 | F16 => 1000,
            F14 | F15 | F17 | F18 | F19 | F20 | F21 | F22 | F23 => 500,
        }
    }

    pub fn default_population(self) -> usize {
        50
    }

    /// Global minimum value. Values that are only known numerically are
    /// rounded towards minus infinity so no evaluation can undercut them.
    pub fn known_optimum(self) -> Option<f64> {
        Some(match self {
            F1 | F2 | F3 | F4 | F5 | F6 | F9 | F10 | F11 | F12 | F13 => 0.0,
            F7 => return None,
            F8 => -12_569.486_618_173,
            F14 => 0.998_003_837_794_449,
            F15 => 3.074_859_8e-4,
            F16 => -1.031_628_453_49,
            F17 => 0.397_887_357_729_738,
            F18 => 3.0,
            F19 => -3.862_782_147_820_76,
            F20 => -3.322_368_011_415_52,
            F21 => -10.153_199_679_058_3,
            F22 => -10.402_940_566_818_7,
            F23 => -10.536_409_816_692_1,
        })
    }

    /// A point at which the known optimum is attained (to the precision
    /// the optimum is known). `None` for F7.
    pub fn optimizer(self) -> Option<Vec<f64>> {
        let n = self.dimension();
        Some(match self {
            F1 | F2 | F3 | F4 | F6 | F9 | F10 | F11 => vec![0.0; n],
            F5 | F13 => vec![1.0; n],
            F12 => vec![-1.0; n],
            F7 => return None,
            F8 => vec![420.968_743_696_169; n],
            F14 => vec![-31.978_333_377_976_48, -31.978_334_007_870_856],
            F15 => vec![
                0.192_833_453_08,
                0.190_836_239_99,
                0.123_117_299_28,
                0.135_765_990_27,
            ],
            F16 => vec![0.089_842_010_034_691_72, -0.712_656_406_173_786_3],
            F17 => vec![PI, 2.275],
            F18 => vec![0.0, -1.0],
            F19 => vec![
                0.114_614_342_030_829_5,
                0.555_648_850_790_538_4,
                0.852_546_953_846_025_1,
            ],
            F20 => vec![
                0.201_689_510_377_946_6,
                0.150_010_691_464_563_25,
                0.476_873_973_370_676_6,
                0.275_332_428_854_379_6,
                0.311_651_616_563_225_2,
                0.657_300_530_846_477_1,
            ],
            F21 => vec![
                4.000_037_152_376_549,
                4.000_133_278_657_566,
                4.000_037_151_057_555,
                4.000_133_277_090_425,
            ],
            F22 => vec![
                4.000_572_914_277_084,
                4.000_689_366_040_889,
                3.999_489_710_793_844_7,
                3.999_606_160_006_792_3,
            ],
            F23 => vec![
                4.000_746_533_201_553,
                4.000_592_934_538_832,
                3.999_663_397_220_255_8,
                3.999_509_801_285_225_5,
            ],
        })
    }

    pub fn is_stochastic(self) -> bool {
        self == F7
    }

    pub fn spec(self) -> ObjectiveSpec {
        ObjectiveSpec {
            id: self.id().to_owned(),
            dimension: self.dimension(),
            bounds: Bounds::new(self.domain()).expect("builtin domains are valid"),
            direction: Direction::Minimise,
            defaults: Defaults {
                population: self.default_population(),
                iterations: self.default_iterations(),
            },
            known_optimum: self.known_optimum(),
        }
    }

    /// Evaluate without checking `x.len()`; callers go through
    /// [`super::Objective::evaluate`] which does.
    pub(crate) fn evaluate_unchecked(self, x: &[f64], rng: &mut dyn RngCore) -> f64 {
        match self {
            F1 => sphere(x),
            F2 => {
                x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
            }
            F3 => {
                let mut prefix = 0.0;
                x.iter()
                    .map(|v| {
                        prefix += v;
                        prefix * prefix
                    })
                    .sum()
            }
            F4 => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            F5 => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            F6 => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
            F7 => {
                let quartic: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                    .sum();
                quartic + rng.gen::<f64>()
            }
            F8 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
            F9 => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            F10 => ackley(x),
            F11 => griewank(x),
            F12 => penalized_1(x),
            F13 => penalized_2(x),
            F14 => foxholes(x),
            F15 => kowalik(x),
            F16 => {
                let (a, b) = (x[0], x[1]);
                4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b
                    + 4.0 * b.powi(4)
            }
            F17 => {
                let (a, b) = (x[0], x[1]);
                (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2)
                    + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
                    + 10.0
            }
            F18 => goldstein_price(x[0], x[1]),
            F19 => hartmann(x, &HARTMANN3_A, &HARTMANN3_P),
            F20 => hartmann(x, &HARTMANN6_A, &HARTMANN6_P),
            F21 => shekel(x, 5),
            F22 => shekel(x, 7),
            F23 => shekel(x, 10),
        }
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = sphere(x) / n;
    let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E
}

fn griewank(x: &[f64]) -> f64 {
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sphere(x) / 4000.0 - prod + 1.0
}

/// Penalty term shared by F12 and F13; zero on the closed interval `[-a, a]`.
pub(crate) fn penalty(v: f64, a: f64, k: f64, m: i32) -> f64 {
    if v > a {
        k * (v - a).powi(m)
    } else if v < -a {
        k * (-v - a).powi(m)
    } else {
        0.0
    }
}

fn penalized_1(x: &[f64]) -> f64 {
    let n = x.len();
    let y = |v: f64| 1.0 + (v + 1.0) / 4.0;
    let mut inner = 10.0 * (PI * y(x[0])).sin().powi(2);
    for w in x.windows(2) {
        inner += (y(w[0]) - 1.0).powi(2) * (1.0 + 10.0 * (PI * y(w[1])).sin().powi(2));
    }
    inner += (y(x[n - 1]) - 1.0).powi(2);
    PI / n as f64 * inner + x.iter().map(|&v| penalty(v, 10.0, 100.0, 4)).sum::<f64>()
}

fn penalized_2(x: &[f64]) -> f64 {
    let last = x[x.len() - 1];
    let mut inner = (3.0 * PI * x[0]).sin().powi(2);
    for &v in x {
        inner += (v - 1.0).powi(2) * (1.0 + (3.0 * PI * v + 1.0).sin().powi(2));
    }
    inner += (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    0.1 * inner + x.iter().map(|&v| penalty(v, 5.0, 100.0, 4)).sum::<f64>()
}

const FOXHOLE_GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

fn foxholes(x: &[f64]) -> f64 {
    // Column j of the 2x25 matrix is (GRID[j % 5], GRID[j / 5]).
    let holes: f64 = (0..25)
        .map(|j| {
            let a1 = FOXHOLE_GRID[j % 5];
            let a2 = FOXHOLE_GRID[j / 5];
            1.0 / ((j + 1) as f64 + (x[0] - a1).powi(6) + (x[1] - a2).powi(6))
        })
        .sum();
    1.0 / (1.0 / 500.0 + holes)
}

const KOWALIK_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
// b_i = 1 / u_i
const KOWALIK_U: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(KOWALIK_U)
        .map(|(&a, u)| {
            let b = 1.0 / u;
            let model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
            (a - model).powi(2)
        })
        .sum()
}

fn goldstein_price(a: f64, b: f64) -> f64 {
    let first = 1.0
        + (a + b + 1.0).powi(2)
            * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let second = 30.0
        + (2.0 * a - 3.0 * b).powi(2)
            * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    first * second
}

const HARTMANN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];

const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.038150, 0.5743, 0.8828],
];

const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const D: usize>(x: &[f64], a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let exponent: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMANN_C[i] * (-exponent).exp()
        })
        .sum::<f64>()
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];

const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(x: &[f64], m: usize) -> f64 {
    -SHEKEL_A[..m]
        .iter()
        .zip(&SHEKEL_C[..m])
        .map(|(row, c)| {
            let d2: f64 = row.iter().zip(x).map(|(a, v)| (v - a).powi(2)).sum();
            1.0 / (d2 + c)
        })
        .sum::<f64>()
}

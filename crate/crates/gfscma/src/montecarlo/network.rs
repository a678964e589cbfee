use super::geometry::{NearestGrid, Point, Torus};
use super::{sample_hppp, McError, SimOptions};
use crate::netmodel::NetworkParams;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeRecord {
    pub position: Point,
    /// Index of the nearest base station.
    pub serving: usize,
    /// Distance to the serving base station.
    pub distance: f64,
    pub truncated: bool,
    /// Codebook in `[0, J)`.
    pub codebook: usize,
    /// `Σ_s |g_s|²` over the `d_s` occupied resource blocks, each `g_s ~ CN(0, 1)`.
    pub gain: f64,
}

/// One network snapshot. `ues[0]` is the typical UE.
#[derive(Debug, Clone)]
pub struct Realization {
    pub bs: NearestGrid,
    pub ues: Vec<UeRecord>,
    pub window_side: f64,
}

impl Realization {
    pub fn torus(&self) -> Torus {
        Torus { side: self.window_side }
    }

    pub fn typical(&self) -> &UeRecord {
        &self.ues[0]
    }

    pub fn bs_points(&self) -> &[Point] {
        self.bs.points()
    }
}

pub(crate) fn check_window(p: &NetworkParams, side: f64) -> Result<(), McError> {
    let radius = p.truncation_radius();
    if !(radius <= side / 4.0) {
        return Err(McError::WindowTooSmall { radius, side });
    }
    Ok(())
}

/// Sum of `d` squared CN(0, 1) magnitudes.
pub(crate) fn rayleigh_gain<R: Rng + ?Sized>(d: usize, rng: &mut R) -> f64 {
    (0..2 * d)
        .map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            x * x
        })
        .sum::<f64>()
        / 2.0
}

/// Drops base stations at `λ_b` and UEs at `λ_u`, adds a typical UE at a
/// uniform position and attaches every UE to its nearest base station.
pub fn sample_realization<R: Rng + ?Sized>(
    p: &NetworkParams,
    opts: &SimOptions,
    rng: &mut R,
) -> Result<Realization, McError> {
    p.validate()?;
    check_window(p, opts.window_side)?;
    let torus = Torus { side: opts.window_side };
    let bs = NearestGrid::new(torus, sample_hppp(p.lambda_b, opts.window_side, rng)?);
    if bs.is_empty() {
        return Err(McError::Domain("no base station in the window".into()));
    }
    let r_max = p.truncation_radius();
    let mut positions = vec![torus.uniform(rng)];
    positions.extend(sample_hppp(p.lambda_u(), opts.window_side, rng)?);
    let ues = positions
        .into_iter()
        .map(|position| {
            let (serving, distance) = bs.nearest(position).expect("non-empty");
            UeRecord {
                position,
                serving,
                distance,
                truncated: distance > r_max,
                codebook: rng.random_range(0..p.j),
                gain: rayleigh_gain(p.d_s, rng),
            }
        })
        .collect();
    Ok(Realization {
        bs,
        ues,
        window_side: opts.window_side,
    })
}

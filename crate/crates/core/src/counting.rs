//! Ball growth and non-backtracking loop counts at the basepoint.
//!
//! A reduced word of length `r` reads a unique non-backtracking walk from the
//! basepoint, and the walk closes exactly when the word lies in `N`. Loop
//! counts are therefore the counting function `N(r) = #{g ∈ N : |g| ≤ r}`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::schreier::{SchreierGraph, UNDEF};
use crate::words::Rank;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCounts {
    /// `counts[r]` is the number of vertices within distance `r`.
    pub counts: Vec<u64>,
    pub exact_up_to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopCounts {
    /// `counts[r] = N(r)`, serialized as decimal strings.
    #[serde(with = "decimal")]
    pub counts: Vec<BigUint>,
    pub exact_up_to: usize,
}

impl LoopCounts {
    /// Elements of length exactly `r`.
    pub fn sphere(&self, r: usize) -> BigUint {
        if r == 0 {
            self.counts[0].clone()
        } else {
            &self.counts[r] - &self.counts[r - 1]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    /// `(r, log N(r) / r)` from the first radius with `N(r) > 1`.
    pub values: Vec<(usize, f64)>,
    /// Value at the largest radius; lower-bound data for a limsup.
    pub estimate: Option<f64>,
    /// `estimate / log(2n − 1)`.
    pub eta: Option<f64>,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("bad integer")))
            .collect()
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().unwrap().ln()
    } else {
        let shift = bits - 900;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub fn ball_counts(g: &SchreierGraph, r: usize) -> Result<BallCounts> {
    g.check_radius(r)?;
    let mut counts = vec![0u64; r + 1];
    for d in g.distances().into_iter().flatten() {
        if d <= r {
            counts[d] += 1;
        }
    }
    for i in 1..=r {
        counts[i] += counts[i - 1];
    }
    Ok(BallCounts {
        counts,
        exact_up_to: r,
    })
}

/// `c_r^{1/r}` for `r ≥ 1`.
pub fn growth_estimate(b: &BallCounts) -> Vec<(usize, f64)> {
    b.counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(r, &c)| (r, (c as f64).powf(1.0 / r as f64)))
        .collect()
}

pub fn loop_counts(g: &SchreierGraph, r: usize) -> Result<LoopCounts> {
    loop_counts_with(Exec::default(), g, r)
}

/// Transfer iteration on directed edges `(v, x)`: a walk ending with `x` at
/// `w` extends by any letter except `x⁻¹`. Only the radius-`⌊R/2⌋` ball is
/// needed, since a closed walk of length `≤ R` never goes farther.
pub fn loop_counts_with(exec: Exec, g: &SchreierGraph, r: usize) -> Result<LoopCounts> {
    let h = r / 2;
    g.check_radius(h)?;
    let d = g.rank().degree();
    let dist = g.distances();
    let mut verts: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| dist[v].is_some_and(|x| x <= h))
        .collect();
    verts.sort_by_key(|&v| (dist[v], v));
    let mut local = vec![UNDEF; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i as u32;
    }
    // next[i * d + y]: local index of target, or UNDEF when outside the ball
    let next: Vec<u32> = verts
        .iter()
        .flat_map(|&v| g.row(v).iter().map(|&t| if t == UNDEF { UNDEF } else { local[t as usize] }))
        .collect();
    let base = local[g.basepoint()] as usize;
    let vdist: Vec<usize> = verts.iter().map(|&v| dist[v].unwrap()).collect();

    // cnt[i * d + x]: walks of the current length whose last step is letter
    // x arriving at vertex i
    let nv = verts.len();
    let mut cnt = vec![BigUint::zero(); nv * d];
    let mut total = BigUint::one();
    let mut counts = vec![total.clone()];
    if r >= 1 {
        for x in 0..d {
            let t = next[base * d + x];
            if t != UNDEF {
                cnt[t as usize * d + x] += 1u32;
            }
        }
    }
    for step in 1..=r {
        if step > 1 {
            // pull: arrive at w by y from u = w·y⁻¹, where the previous
            // letter x at u is anything but y⁻¹
            let arrive_sum: Vec<BigUint> = par::map_range(exec, nv, |u| {
                cnt[u * d..(u + 1) * d].iter().sum::<BigUint>()
            });
            let fresh: Vec<Vec<BigUint>> = par::map_range(exec, nv, |w| {
                let remaining = r - step;
                (0..d)
                    .map(|y| {
                        let u = next[w * d + (y ^ 1)];
                        if u == UNDEF || vdist[w] > remaining {
                            return BigUint::zero();
                        }
                        let u = u as usize;
                        &arrive_sum[u] - &cnt[u * d + (y ^ 1)]
                    })
                    .collect()
            });
            cnt = fresh.into_iter().flatten().collect();
        }
        let closed: BigUint = cnt[base * d..(base + 1) * d].iter().sum();
        total += closed;
        counts.push(total.clone());
    }
    Ok(LoopCounts {
        counts,
        exact_up_to: r,
    })
}

pub fn delta_estimate(l: &LoopCounts, rank: Rank) -> DeltaEstimate {
    let values: Vec<(usize, f64)> = l
        .counts
        .iter()
        .enumerate()
        .skip(1)
        .skip_while(|(_, c)| c.is_one())
        .map(|(r, c)| (r, ln_big(c) / r as f64))
        .collect();
    let estimate = values.last().map(|&(_, v)| v);
    DeltaEstimate {
        eta: estimate.map(|e| e / rank.log_branching()),
        values,
        estimate,
    }
}

/// `Σ_{r ≤ R} #{|g| = r} e^{−sr}`.
pub fn poincare_partial(l: &LoopCounts, s: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::OutOfRange {
            what: "exponent s",
            value: s,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok((0..l.counts.len())
        .map(|r| l.sphere(r).to_f64().unwrap_or(f64::INFINITY) * (-s * r as f64).exp())
        .sum())
}

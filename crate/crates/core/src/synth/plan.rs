use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of one recursive level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToomParams {
    /// Number of blocks the input is split into.
    pub q: usize,
    /// Ring parameter: blocks live in `GF(2)[y]/(y^(2*3^s)+y^(3^s)+1)`.
    pub s: u32,
    /// The DFT has `3^m` points.
    pub m: u32,
    /// `ceil(n / q)`.
    pub block_len: usize,
    /// `4 * 3^s`, the circulant order of each recursive sub-problem.
    pub sub_len: usize,
    pub sub_plan: Box<SynthPlan>,
}

impl ToomParams {
    pub fn points(&self) -> usize {
        3usize.pow(self.m)
    }

    pub fn third(&self) -> usize {
        3usize.pow(self.s)
    }

    pub fn ring_deg(&self) -> usize {
        2 * self.third()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanKind {
    Trivial,
    Lupanov,
    Toom(ToomParams),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthPlan {
    pub n: usize,
    pub d: usize,
    pub kind: PlanKind,
}

impl SynthPlan {
    /// `k = ceil(d / 2)`.
    pub fn k(&self) -> usize {
        self.d.div_ceil(2)
    }

    pub fn toom(&self) -> Option<&ToomParams> {
        match &self.kind {
            PlanKind::Toom(t) => Some(t),
            _ => None,
        }
    }

    /// Number of recursive levels below this one.
    pub fn levels(&self) -> usize {
        self.toom().map_or(0, |t| 1 + t.sub_plan.levels())
    }
}

fn min_pow3_exponent(at_least: usize) -> u32 {
    let mut e = 0;
    let mut p = 1usize;
    while p < at_least {
        p *= 3;
        e += 1;
    }
    e
}

fn base_plan(n: usize, d: usize) -> SynthPlan {
    let kind = if d % 2 == 1 { PlanKind::Trivial } else { PlanKind::Lupanov };
    SynthPlan { n, d, kind }
}

/// Chooses the construction for an order-`n` circulant under depth budget `d`.
///
/// `d = 1` is the trivial circuit and `d = 2` the Lupanov circuit. For
/// `d >= 3` with `k = ceil(d/2)`, the block count is `q = round(n^(1/k))`
/// (odd `d`) or `q = round((n / log2 n)^(1/k))` (even `d`), clamped to
/// `[2, n]`; `s` and `m` are the least exponents with `3^s >= ceil(n/q)` and
/// `3^m >= 2q`. If `m > s + 1` the root of unity does not exist and `q` is
/// decremented; when no `q >= 2` works the base construction of matching
/// parity is used.
pub fn plan_parameters(n: usize, d: usize) -> Result<SynthPlan> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    match d {
        0 => Err(Error::InvalidParameter("depth budget must be >= 1".into())),
        1 => Ok(SynthPlan { n, d, kind: PlanKind::Trivial }),
        2 => Ok(SynthPlan { n, d, kind: PlanKind::Lupanov }),
        _ if n < 2 => Ok(base_plan(n, d)),
        _ => {
            let k = d.div_ceil(2) as f64;
            let nf = n as f64;
            let target = if d % 2 == 1 { nf } else { nf / nf.log2() };
            let mut q = (target.powf(1.0 / k).round() as usize).clamp(2, n);
            loop {
                let block_len = n.div_ceil(q);
                let s = min_pow3_exponent(block_len);
                let m = min_pow3_exponent(2 * q);
                if m <= s + 1 {
                    let sub_len = 4 * 3usize.pow(s);
                    let sub_plan = Box::new(plan_parameters(sub_len, d - 2)?);
                    return Ok(SynthPlan {
                        n,
                        d,
                        kind: PlanKind::Toom(ToomParams {
                            q,
                            s,
                            m,
                            block_len,
                            sub_len,
                            sub_plan,
                        }),
                    });
                }
                if q <= 2 {
                    return Ok(base_plan(n, d));
                }
                q -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let p = plan_parameters(9, 3).unwrap();
        let t = p.toom().unwrap();
        assert_eq!((t.q, t.s, t.m, t.block_len, t.sub_len), (3, 1, 2, 3, 12));
        assert_eq!(t.sub_plan.d, 1);
        assert_eq!(t.sub_plan.kind, PlanKind::Trivial);

        let p = plan_parameters(64, 3).unwrap();
        let t = p.toom().unwrap();
        assert_eq!((t.q, t.s, t.m), (8, 2, 3));

        assert_eq!(plan_parameters(16, 1).unwrap().kind, PlanKind::Trivial);
        assert_eq!(plan_parameters(16, 2).unwrap().kind, PlanKind::Lupanov);
    }

    #[test]
    fn even_depth_uses_lupanov_leaves() {
        let p = plan_parameters(81, 4).unwrap();
        let t = p.toom().unwrap();
        assert_eq!(t.sub_plan.kind, PlanKind::Lupanov);
        let p = plan_parameters(100, 6).unwrap();
        let mut cur = &p;
        while let Some(t) = cur.toom() {
            cur = &t.sub_plan;
        }
        assert_eq!(cur.kind, PlanKind::Lupanov);
    }

    #[test]
    fn planning_is_total_and_feasible() {
        for n in 1..=300 {
            for d in 1..=7 {
                let p = plan_parameters(n, d).unwrap();
                assert_eq!((p.n, p.d), (n, d));
                if let Some(t) = p.toom() {
                    assert!(d >= 3);
                    assert!((2..=n).contains(&t.q));
                    assert!(t.third() >= t.block_len);
                    assert!(t.points() >= 2 * t.q);
                    assert!(t.m <= t.s + 1);
                    assert_eq!(t.sub_plan.d, d - 2);
                    assert_eq!(t.sub_plan.n, t.sub_len);
                }
            }
        }
        assert!(plan_parameters(0, 3).is_err());
        assert!(plan_parameters(5, 0).is_err());
    }

    #[test]
    fn tiny_sizes_fall_back() {
        assert_eq!(plan_parameters(1, 3).unwrap().kind, PlanKind::Trivial);
        assert_eq!(plan_parameters(2, 3).unwrap().kind, PlanKind::Trivial);
        assert_eq!(plan_parameters(2, 4).unwrap().kind, PlanKind::Lupanov);
    }
}

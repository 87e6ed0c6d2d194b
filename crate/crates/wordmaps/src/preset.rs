//! Named groups and verification fleets.
//!
//! Preset and fleet names are the stable addressing contract for the CLI
//! and the test suites; treat renames as breaking changes.
//!
//! Fixed presets cover the extraspecial groups up to order 3^5 and the two
//! benchmark special groups of order 64 and p^8. Abelian groups are
//! addressed by their cyclic orders: `z4`, `z2x4`, or `abelian:2,4`.

use crate::extraspecial::{ExtraspecialKind, Variant};
use crate::fp::{BilinearForm, LinearMap, QuadraticMap};
use crate::group::{build_group, Group, GroupSpec};
use crate::{Error, Result};

/// All fixed preset names.
pub const PRESETS: &[&str] = &[
    "q2",
    "d8",
    "es32-d",
    "es32-q",
    "es27-expp",
    "es27-expp2",
    "es243-expp",
    "es243-expp2",
    "example-3-8",
    "example-3-9-p2",
    "example-3-9-p3",
];

/// Named fleets used by the verify commands.
pub const FLEETS: &[(&str, &[&str])] = &[
    (
        "extraspecial-small",
        &[
            "q2",
            "d8",
            "es27-expp",
            "es27-expp2",
            "es32-d",
            "es32-q",
            "es243-expp",
            "es243-expp2",
        ],
    ),
    (
        "abelian-small",
        &[
            "z2", "z3", "z5", "z2x2", "z2x2x2", "z3x3", "z3x3x3", "z5x5", "z5x5x5", "z4",
            "z8", "z2x4", "z9",
        ],
    ),
    (
        "class2-small",
        &[
            "q2",
            "d8",
            "es27-expp",
            "es27-expp2",
            "es32-d",
            "es32-q",
            "example-3-8",
        ],
    ),
    (
        "oracle-small",
        &["q2", "d8", "es32-d", "es32-q", "es27-expp", "es27-expp2"],
    ),
];

/// The extraspecial kind behind a preset name, if it is one.
pub fn extraspecial_kind(name: &str) -> Result<ExtraspecialKind> {
    match name {
        "q2" => ExtraspecialKind::new(2, 1, Variant::QType),
        "d8" => ExtraspecialKind::new(2, 1, Variant::DType),
        "es32-d" => ExtraspecialKind::new(2, 2, Variant::DType),
        "es32-q" => ExtraspecialKind::new(2, 2, Variant::QType),
        "es27-expp" => ExtraspecialKind::new(3, 1, Variant::ExponentP),
        "es27-expp2" => ExtraspecialKind::new(3, 1, Variant::ExponentP2),
        "es243-expp" => ExtraspecialKind::new(3, 2, Variant::ExponentP),
        "es243-expp2" => ExtraspecialKind::new(3, 2, Variant::ExponentP2),
        _ => Err(Error::InvalidSpec(format!(
            "{name:?} is not an extraspecial preset"
        ))),
    }
}

/// Order-64 benchmark group: the quadratic map
/// q(a,b,c) = (a^2+b^2+ab, a^2+ac, bc) on GF(2)^3.
fn order64_spec() -> Result<GroupSpec> {
    GroupSpec::two_special(QuadraticMap::new(
        vec![
            vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 0]],
            vec![vec![1, 0, 1], vec![0, 0, 0], vec![0, 0, 0]],
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]],
        ],
        3,
    )?)
}

/// Order-256 benchmark group: q(a,b,c,d) = (b^2+ab, ac, bc, ad) on GF(2)^4.
fn rank8_p2_spec() -> Result<GroupSpec> {
    GroupSpec::two_special(QuadraticMap::new(
        vec![
            vec![
                vec![0, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
            ],
            vec![
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
            ],
            vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
            ],
            vec![
                vec![0, 0, 0, 1],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
            ],
        ],
        4,
    )?)
}

/// Order-6561 benchmark group over GF(3): the bilinear form
/// B(v, w) = (v0 w1 - v1 w0, v0 w2 - v2 w0, v1 w2 - v2 w1, v0 w3 - v3 w0)
/// with power map T(v) = (v1, 0, 0, 0).
fn rank8_p3_spec() -> Result<GroupSpec> {
    let p = 3u32;
    let neg = (p - 1) as u64;
    let mut mats = vec![vec![vec![0u64; 4]; 4]; 4];
    for (k, (i, j)) in [(0usize, 1usize), (0, 2), (1, 2), (0, 3)].iter().enumerate() {
        mats[k][*i][*j] = 1;
        mats[k][*j][*i] = neg;
    }
    let b = BilinearForm::new(mats, 4, p)?;
    let t = LinearMap::new(
        vec![
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0],
        ],
        4,
        p,
    )?;
    GroupSpec::odd_special(p, b, t)
}

/// Parse an abelian preset name: `z4`, `z2x4x8`, or `abelian:2,4,8`.
fn abelian_orders(name: &str) -> Option<Vec<u64>> {
    if let Some(list) = name.strip_prefix("abelian:") {
        return list
            .split(',')
            .map(|tok| tok.trim().parse::<u64>().ok())
            .collect();
    }
    let body = name.strip_prefix('z')?;
    body.split('x').map(|tok| tok.parse::<u64>().ok()).collect()
}

/// Resolve a preset name to a validated presentation.
pub fn resolve_spec(name: &str) -> Result<GroupSpec> {
    match name {
        "example-3-8" => order64_spec(),
        "example-3-9-p2" => rank8_p2_spec(),
        "example-3-9-p3" => rank8_p3_spec(),
        _ => {
            if let Ok(kind) = extraspecial_kind(name) {
                return kind.spec();
            }
            if let Some(orders) = abelian_orders(name) {
                return GroupSpec::abelian(orders);
            }
            Err(Error::InvalidSpec(format!("unknown preset {name:?}")))
        }
    }
}

/// Resolve and build.
pub fn resolve(name: &str) -> Result<Group> {
    build_group(resolve_spec(name)?)
}

/// The member names of a fleet.
pub fn fleet_members(name: &str) -> Result<&'static [&'static str]> {
    FLEETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, members)| *members)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown fleet {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_build() {
        for name in PRESETS {
            let g = resolve(name).unwrap();
            assert!(g.order() > 1, "{name}");
        }
    }

    #[test]
    fn abelian_names() {
        assert_eq!(resolve("z4").unwrap().order(), 4);
        assert_eq!(resolve("z2x4").unwrap().order(), 8);
        assert_eq!(resolve("abelian:2,4").unwrap().order(), 8);
        assert_eq!(resolve("z3x3x3").unwrap().order(), 27);
        assert!(resolve("z6").is_err()); // not a prime power
        assert!(resolve("nope").is_err());
    }

    #[test]
    fn fleets_resolve() {
        for (fleet, members) in FLEETS {
            for name in *members {
                resolve(name).unwrap_or_else(|e| panic!("{fleet}/{name}: {e}"));
            }
        }
    }

    #[test]
    fn preset_orders() {
        let expect = [
            ("q2", 8u64),
            ("d8", 8),
            ("es32-d", 32),
            ("es32-q", 32),
            ("es27-expp", 27),
            ("es27-expp2", 27),
            ("es243-expp", 243),
            ("es243-expp2", 243),
            ("example-3-8", 64),
            ("example-3-9-p2", 256),
            ("example-3-9-p3", 6561),
        ];
        for (name, order) in expect {
            assert_eq!(resolve(name).unwrap().order(), order, "{name}");
        }
    }
}

//! The two extraspecial p-groups of each order p^(2n+1).
//!
//! Presets build the standard representatives: for odd p a symplectic form
//! on a 2n-dimensional V with S = GF(p) and a power map that is zero
//! (exponent p) or supported on the first basis vector (exponent p^2); for
//! p = 2 the two quadratic-form types, split by the Arf invariant.
//!
//! `classify_orbits` materializes the orbits of the natural automorphism
//! action from element data (orders, centrality, coset membership), and
//! `census` counts automorphism-invariant subsets containing the identity
//! against the three realized word images {1}, Z(G), G.

use serde::Serialize;

use crate::fp::{BilinearForm, LinearMap, QuadraticMap};
use crate::group::{build_group, ElementSet, Group, GroupSpec};
use crate::{Error, Result};

/// Candidate enumeration cap: unions of at most this many orbits.
pub const MAX_ORBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Odd p, every noncentral element of order p.
    ExponentP,
    /// Odd p, elements of order p^2 present.
    ExponentP2,
    /// p = 2, Arf invariant 0 (dihedral-type).
    DType,
    /// p = 2, Arf invariant 1 (quaternion-type).
    QType,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::ExponentP => "exponent-p",
            Variant::ExponentP2 => "exponent-p2",
            Variant::DType => "D-type",
            Variant::QType => "Q-type",
        }
    }
}

/// Which extraspecial group: the prime, the half-rank n (order p^(2n+1)),
/// and the isomorphism type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtraspecialKind {
    p: u32,
    half_rank: usize,
    variant: Variant,
}

impl ExtraspecialKind {
    pub fn new(p: u32, half_rank: usize, variant: Variant) -> Result<Self> {
        if half_rank == 0 {
            return Err(Error::InvalidSpec("half-rank must be positive".into()));
        }
        let odd_variant = matches!(variant, Variant::ExponentP | Variant::ExponentP2);
        if (p == 2) == odd_variant {
            return Err(Error::InvalidSpec(format!(
                "variant {} does not exist for p = {p}",
                variant.name()
            )));
        }
        if !crate::fp::is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        Ok(ExtraspecialKind {
            p,
            half_rank,
            variant,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn half_rank(&self) -> usize {
        self.half_rank
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(2 * self.half_rank as u32 + 1)
    }

    /// The presentation: V has basis pairs (v_i, w_i) in adjacent
    /// coordinates with B(v_i, w_i) = 1 and all other pairings zero.
    pub fn spec(&self) -> Result<GroupSpec> {
        let n = 2 * self.half_rank;
        let p = self.p;
        if p == 2 {
            let mut coeffs = vec![vec![0u64; n]; n];
            for i in 0..self.half_rank {
                coeffs[2 * i][2 * i + 1] = 1;
            }
            if self.variant == Variant::QType {
                coeffs[0][0] = 1;
                coeffs[1][1] = 1;
            }
            GroupSpec::two_special(QuadraticMap::new(vec![coeffs], n)?)
        } else {
            let mut mat = vec![vec![0u64; n]; n];
            for i in 0..self.half_rank {
                mat[2 * i][2 * i + 1] = 1;
                mat[2 * i + 1][2 * i] = (p - 1) as u64;
            }
            let b = BilinearForm::new(vec![mat], n, p)?;
            let mut t_row = vec![0u64; n];
            if self.variant == Variant::ExponentP2 {
                t_row[0] = 1;
            }
            let t = LinearMap::new(vec![t_row], n, p)?;
            GroupSpec::odd_special(p, b, t)
        }
    }

    pub fn build(&self) -> Result<Group> {
        build_group(self.spec()?)
    }
}

/// What an orbit of the automorphism action looks like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitLabel {
    Identity,
    CentralNonidentity,
    /// Noncentral elements of the given order.
    ByOrder { order: u64 },
    /// The invariant central coset over alpha * w_1 (exponent-p^2 kinds).
    W1Line { alpha: u32 },
    /// Noncentral order-p elements off the w_1 line with trivial power map
    /// (exponent-p^2 kinds of order above p^3).
    GenericKernelClass,
}

/// One orbit, materialized.
#[derive(Debug, Clone)]
pub struct OrbitDescriptor {
    pub label: OrbitLabel,
    pub size: u64,
    pub set: ElementSet,
}

/// Partition the group into the orbits of its automorphism group, read off
/// the classification for the given kind. Descriptors are materialized
/// from element data and checked to partition the group.
pub fn classify_orbits(kind: ExtraspecialKind, group: &Group) -> Result<Vec<OrbitDescriptor>> {
    if group.order() != kind.order() {
        return Err(Error::InvalidSpec(
            "group does not match the extraspecial kind".into(),
        ));
    }
    let p = kind.p() as u64;
    let order = group.order();
    let id_rank = group.rank(&group.identity());

    let mut identity_set = ElementSet::empty(order);
    identity_set.insert(id_rank);
    let mut central_non = ElementSet::empty(order);
    for r in group.center().iter() {
        if r != id_rank {
            central_non.insert(r);
        }
    }

    let mut orbits = vec![
        OrbitDescriptor {
            label: OrbitLabel::Identity,
            size: 1,
            set: identity_set,
        },
        OrbitDescriptor {
            label: OrbitLabel::CentralNonidentity,
            size: p - 1,
            set: central_non,
        },
    ];

    match kind.variant {
        Variant::DType | Variant::QType => {
            // Noncentral elements split by order (2 or 4); one of the two
            // classes may be empty.
            for elem_order in [2u64, 4] {
                let mut set = ElementSet::empty(order);
                for r in 0..order {
                    let g = group.unrank(r)?;
                    if !group.is_central(&g) && group.order_of(&g) == elem_order {
                        set.insert(r);
                    }
                }
                if !set.is_empty() {
                    orbits.push(OrbitDescriptor {
                        label: OrbitLabel::ByOrder { order: elem_order },
                        size: set.len(),
                        set,
                    });
                }
            }
        }
        Variant::ExponentP => {
            let mut set = ElementSet::empty(order);
            for r in 0..order {
                if !group.center().contains(r) {
                    set.insert(r);
                }
            }
            orbits.push(OrbitDescriptor {
                label: OrbitLabel::ByOrder { order: p },
                size: set.len(),
                set,
            });
        }
        Variant::ExponentP2 => {
            // The w_1 basis vector sits in v-coordinate 1; each coset
            // (alpha * w_1) Z(G) is a single orbit.
            for alpha in 1..kind.p() {
                let mut set = ElementSet::empty(order);
                for r in 0..order {
                    let g = group.unrank(r)?;
                    let v = g.v();
                    if v[1] == alpha
                        && v.iter().enumerate().all(|(i, &d)| i == 1 || d == 0)
                    {
                        set.insert(r);
                    }
                }
                orbits.push(OrbitDescriptor {
                    label: OrbitLabel::W1Line { alpha },
                    size: p,
                    set,
                });
            }
            // Remainder: noncentral, off the w_1 line. Order p^2 elements
            // form one class; for order above p^3 the order-p leftovers
            // form another.
            let mut order_p2 = ElementSet::empty(order);
            let mut kernel_rest = ElementSet::empty(order);
            for r in 0..order {
                let g = group.unrank(r)?;
                let v = g.v();
                if group.is_central(&g) {
                    continue;
                }
                if v.iter().enumerate().all(|(i, &d)| i == 1 || d == 0) {
                    continue; // w_1 line
                }
                if group.order_of(&g) == p * p {
                    order_p2.insert(r);
                } else {
                    kernel_rest.insert(r);
                }
            }
            orbits.push(OrbitDescriptor {
                label: OrbitLabel::ByOrder { order: p * p },
                size: order_p2.len(),
                set: order_p2,
            });
            if kind.half_rank > 1 {
                orbits.push(OrbitDescriptor {
                    label: OrbitLabel::GenericKernelClass,
                    size: kernel_rest.len(),
                    set: kernel_rest,
                });
            } else if !kernel_rest.is_empty() {
                return Err(Error::VerificationFailed(
                    "unexpected order-p elements off the w1 line at order p^3".into(),
                ));
            }
        }
    }

    // The descriptors must partition the group.
    let mut union = ElementSet::empty(order);
    let mut total = 0u64;
    for orbit in &orbits {
        if orbit.size != orbit.set.len() {
            return Err(Error::VerificationFailed(format!(
                "orbit {:?} materialized {} elements, predicted {}",
                orbit.label,
                orbit.set.len(),
                orbit.size
            )));
        }
        total += orbit.size;
        union.union_with(&orbit.set);
    }
    if total != order || union.len() != order {
        return Err(Error::VerificationFailed(
            "orbit descriptors do not partition the group".into(),
        ));
    }
    Ok(orbits)
}

/// Orbit count straight from the classification, no group build needed.
pub fn orbit_count(kind: ExtraspecialKind) -> u64 {
    let p = kind.p() as u64;
    match kind.variant {
        Variant::QType if kind.half_rank == 1 => 3,
        Variant::DType | Variant::QType => 4,
        Variant::ExponentP => 3,
        Variant::ExponentP2 => {
            if kind.half_rank == 1 {
                p + 2
            } else {
                p + 3
            }
        }
    }
}

/// Counts for one extraspecial group: orbits, candidate subsets, realized
/// word images, and the leftover impostors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Census {
    pub p: u32,
    pub order: u64,
    pub variant: &'static str,
    pub orbits: u64,
    pub candidates: u64,
    pub word_images: u64,
    pub impostors: u64,
}

/// Candidate subsets are unions of orbits containing the identity: there
/// are 2^(orbits - 1) of them, of which exactly three are word images.
pub fn census(kind: ExtraspecialKind) -> Census {
    let orbits = orbit_count(kind);
    let candidates = 1u64 << (orbits - 1);
    Census {
        p: kind.p(),
        order: kind.order(),
        variant: kind.variant().name(),
        orbits,
        candidates,
        word_images: 3,
        impostors: candidates - 3,
    }
}

/// Which of the three realized word images a candidate equals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realized {
    One,
    Center,
    Group,
}

/// A union of orbits containing the identity orbit.
#[derive(Debug, Clone)]
pub struct Candidate {
    /// Bit i set means orbit i (in `classify_orbits` order) is included.
    pub orbit_mask: u64,
    pub set: ElementSet,
    /// None marks an impostor.
    pub realized: Option<Realized>,
}

/// Enumerate every candidate subset and mark the realized ones.
pub fn enumerate_candidates(
    kind: ExtraspecialKind,
    group: &Group,
) -> Result<Vec<Candidate>> {
    let orbits = classify_orbits(kind, group)?;
    if orbits.len() > MAX_ORBITS {
        return Err(Error::BudgetExceeded {
            what: "candidate enumeration over orbits".into(),
            needed: orbits.len() as u64,
            budget: MAX_ORBITS as u64,
        });
    }
    let order = group.order();
    let mut one = ElementSet::empty(order);
    one.insert(group.rank(&group.identity()));
    let full = {
        let mut s = ElementSet::empty(order);
        for r in 0..order {
            s.insert(r);
        }
        s
    };

    let free = orbits.len() - 1; // orbit 0 is the identity orbit, always in
    let mut out = Vec::with_capacity(1 << free);
    for mask in 0..(1u64 << free) {
        let mut set = orbits[0].set.clone();
        for (i, orbit) in orbits.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                set.union_with(&orbit.set);
            }
        }
        let realized = if set == one {
            Some(Realized::One)
        } else if &set == group.center() {
            Some(Realized::Center)
        } else if set == full {
            Some(Realized::Group)
        } else {
            None
        };
        out.push(Candidate {
            orbit_mask: (mask << 1) | 1,
            set,
            realized,
        });
    }
    Ok(out)
}

//! Parameter sets for the reproducible figures.

use ceo_core::initcond::Family;

pub enum Source {
    /// Real `(x, p)` level curves `H = ½` at `a = 1`, one per `b`.
    Portrait { bs: &'static [f64] },
    /// `(x, y)` projections of integrated orbits at positive energy.
    Orbits {
        family: Family,
        b: f64,
        cs: &'static [f64],
    },
}

pub struct Figure {
    pub id: &'static str,
    pub title: &'static str,
    pub source: Source,
}

const FAMILY_A_CS: &[f64] = &[1.1, 1.4, 1.8, 2.2, 2.6];
// Family A at b = 0.8 exists only for 1 <= c < 1/sqrt(0.8).
const FAMILY_A_CS_B08: &[f64] = &[1.01, 1.03, 1.06, 1.09, 1.11];

pub const FIGURES: &[Figure] = &[
    Figure {
        id: "1.1",
        title: "(x,p) level curves, 0 <= b < 1",
        source: Source::Portrait {
            bs: &[0.0, 0.3, 0.6, 0.9],
        },
    },
    Figure {
        id: "1.2",
        title: "(x,p) level curves, b down to -1500",
        source: Source::Portrait {
            bs: &[0.0, -10.0, -100.0, -1500.0],
        },
    },
    Figure {
        id: "2.1",
        title: "family A, b = 0",
        source: Source::Orbits {
            family: Family::A,
            b: 0.0,
            cs: FAMILY_A_CS,
        },
    },
    Figure {
        id: "2.2",
        title: "family A, b = 0.8",
        source: Source::Orbits {
            family: Family::A,
            b: 0.8,
            cs: FAMILY_A_CS_B08,
        },
    },
    Figure {
        id: "2.3",
        title: "family A, b = -10",
        source: Source::Orbits {
            family: Family::A,
            b: -10.0,
            cs: FAMILY_A_CS,
        },
    },
    Figure {
        id: "2.4",
        title: "family A, c = 2, b = -0.2499",
        source: Source::Orbits {
            family: Family::A,
            b: -0.2499,
            cs: &[2.0],
        },
    },
    Figure {
        id: "3.1",
        title: "family B, c = 0.06, b = 0.5",
        source: Source::Orbits {
            family: Family::B,
            b: 0.5,
            cs: &[0.06],
        },
    },
    Figure {
        id: "3.2",
        title: "family B, c = 0.06, b = 1",
        source: Source::Orbits {
            family: Family::B,
            b: 1.0,
            cs: &[0.06],
        },
    },
    Figure {
        id: "3.3",
        title: "family B, c = 1.2, b = 1",
        source: Source::Orbits {
            family: Family::B,
            b: 1.0,
            cs: &[1.2],
        },
    },
    Figure {
        id: "4.1",
        title: "family B, c = 0.8, b = -0.09998",
        source: Source::Orbits {
            family: Family::B,
            b: -0.09998,
            cs: &[0.8],
        },
    },
    Figure {
        id: "4.2",
        title: "family B, c = 0.8, b = -0.18",
        source: Source::Orbits {
            family: Family::B,
            b: -0.18,
            cs: &[0.8],
        },
    },
];

pub fn ids() -> Vec<&'static str> {
    FIGURES.iter().map(|f| f.id).collect()
}

pub fn find(id: &str) -> Option<&'static Figure> {
    FIGURES.iter().find(|f| f.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ceo_core::initcond::{self, EnergySign};
    use ceo_core::Params;

    #[test]
    fn every_catalogued_orbit_has_an_initial_condition() {
        for fig in FIGURES {
            match fig.source {
                Source::Orbits { family, b, cs } => {
                    for &c in cs {
                        let prm = Params::unit_stiffness(b);
                        let ic = match family {
                            Family::A => initcond::ic_family_a(c, prm, EnergySign::Positive),
                            _ => initcond::ic_family_b(c, prm, EnergySign::Positive),
                        };
                        assert!(ic.is_ok(), "figure {} c={c}", fig.id);
                    }
                }
                Source::Portrait { bs } => {
                    for &b in bs {
                        assert!(
                            initcond::portrait_curve(Params::unit_stiffness(b), 0.5, 64).is_ok()
                        );
                    }
                }
            }
        }
    }
}

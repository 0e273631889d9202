/// Enumeration caps guarding the brute-force routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum group order produced by closure enumeration.
    pub closure: usize,
    /// Maximum group order accepted by the group-algebra commutator oracle.
    pub hh0_group: usize,
    /// Maximum number of arrows accepted by the groupoid-algebra commutator oracle.
    pub hh0_groupoid: usize,
    /// Maximum dimension of a single total-complex degree when explicit bases are requested.
    pub dense_basis: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { closure: 1_000_000, hh0_group: 500, hh0_groupoid: 2000, dense_basis: 4000 }
    }
}

impl Caps {
    pub const ENV_VAR: &'static str = "DELOC_CAP";

    /// Defaults, with every cap replaced by `DELOC_CAP` when that variable holds an integer.
    pub fn from_env() -> Self {
        match std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(cap) => Self::uniform(cap),
            None => Self::default(),
        }
    }

    pub fn uniform(cap: usize) -> Self {
        Self { closure: cap, hh0_group: cap, hh0_groupoid: cap, dense_basis: cap }
    }
}

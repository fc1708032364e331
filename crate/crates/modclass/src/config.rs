use serde::{Deserialize, Serialize};

/// Size caps for the bounded searches.
///
/// Every cap is surfaced as an explicit error when exceeded.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct Caps {
    /// Maximum ring size accepted by `build_ring`.
    pub max_ring_size: usize,
    /// Maximum module size accepted by module constructors.
    pub max_module_size: usize,
    /// Maximum number of submodules enumerated by `all_submodules`.
    pub max_lattice: usize,
    /// Maximum hom-space size for full enumeration.
    pub max_hom_enum: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ring_size: 4096,
            max_module_size: 65536,
            max_lattice: 20000,
            max_hom_enum: 65536,
        }
    }
}

impl Caps {
    /// Default caps with the `MODCLASS_MAX_MODULE_SIZE` env override applied.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("MODCLASS_MAX_MODULE_SIZE") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.max_module_size = n;
            }
        }
        caps
    }
}

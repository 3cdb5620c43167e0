//! Size limits for the exhaustive parts of the analysis.

use crate::binary::ENUMERATION_CAP;
use crate::dsl::Options;
use crate::encoding::PARTITION_CAP;
use crate::error::{Error, Result};

pub const LISTING_CAP: usize = 10_000;

/// Environment variable read by [`Caps::from_env`], e.g.
/// `SETCONS_CAPS="enum=16,partition=12,listing=500"`.
pub const CAPS_ENV: &str = "SETCONS_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for which 𝔹ⁿ is enumerated.
    pub enumeration: usize,
    /// Most generators a partition may have.
    pub partition: usize,
    /// Most set-valued equilibria listed one by one.
    pub listing: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: ENUMERATION_CAP,
            partition: PARTITION_CAP,
            listing: LISTING_CAP,
        }
    }
}

impl Caps {
    /// Applies `key=value` pairs separated by commas.
    pub fn with_overrides(mut self, text: &str) -> Result<Caps> {
        for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || Error::InvalidLiteral(format!("cap setting `{pair}`"));
            let (key, value) = pair.split_once('=').ok_or_else(bad)?;
            let value: usize = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "enum" => self.enumeration = value,
                "partition" => self.partition = value,
                "listing" => self.listing = value,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }

    /// Caps set in a system file.
    pub fn with_options(mut self, options: &Options) -> Caps {
        if let Some(v) = options.enum_cap {
            self.enumeration = v;
        }
        if let Some(v) = options.partition_cap {
            self.partition = v;
        }
        if let Some(v) = options.listing_cap {
            self.listing = v;
        }
        self
    }

    /// Defaults, then the file's options, then the environment.
    pub fn resolve(options: &Options) -> Result<Caps> {
        let caps = Caps::default().with_options(options);
        match std::env::var(CAPS_ENV) {
            Ok(text) => caps.with_overrides(&text),
            Err(_) => Ok(caps),
        }
    }
}

use std::sync::atomic::{AtomicU64, Ordering};

/// Prefix of deterministic draws; the remaining 12 digits hold the counter.
pub const DETERMINISTIC_PREFIX: &str = "00000000-0000-4000-8000-";

/// Source of the suffixes appended to local predicates.
///
/// Draws are returned in the usual hyphenated form. Random mode produces RFC
/// 4122 version-4 UUIDs. Deterministic mode produces UUID-shaped strings
/// whose last group is a zero-padded decimal counter starting at the seed.
#[derive(Debug)]
pub enum UuidSource {
    Random,
    Deterministic { next: AtomicU64 },
}

impl UuidSource {
    pub fn random() -> Self {
        UuidSource::Random
    }

    pub fn deterministic(seed: u64) -> Self {
        UuidSource::Deterministic {
            next: AtomicU64::new(seed),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, UuidSource::Deterministic { .. })
    }

    pub fn draw(&self) -> String {
        match self {
            UuidSource::Random => uuid::Uuid::new_v4().hyphenated().to_string(),
            UuidSource::Deterministic { next } => {
                let k = next.fetch_add(1, Ordering::Relaxed);
                format!("{DETERMINISTIC_PREFIX}{:012}", k % 1_000_000_000_000)
            }
        }
    }

    /// A draw with hyphens replaced by underscores, ready to be appended to a
    /// predicate name.
    pub fn draw_suffix(&self) -> String {
        self.draw().replace('-', "_")
    }
}

impl Default for UuidSource {
    fn default() -> Self {
        UuidSource::Random
    }
}

/// The deterministic suffix produced by draw number `k`.
pub fn deterministic_suffix(k: u64) -> String {
    format!("{DETERMINISTIC_PREFIX}{k:012}").replace('-', "_")
}

/// True if `name` ends with `_` followed by a UUID whose groups are joined by
/// underscores.
pub fn has_uuid_suffix(name: &str) -> bool {
    const GROUPS: [usize; 5] = [8, 4, 4, 4, 12];
    let len: usize = GROUPS.iter().sum::<usize>() + GROUPS.len();
    if name.len() < len || !name.is_char_boundary(name.len() - len) {
        return false;
    }
    let tail = &name[name.len() - len..];
    let mut parts = tail.split('_');
    if parts.next() != Some("") {
        return false;
    }
    GROUPS.iter().all(|&n| {
        parts
            .next()
            .is_some_and(|p| p.len() == n && p.bytes().all(|b| b.is_ascii_hexdigit()))
    }) && parts.next().is_none()
}

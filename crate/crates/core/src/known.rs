//! Published reference tables, transcribed as constants. Nothing here is
//! computed; the table generator compares its own output against these.

/// First genus of the main table and of the pointed-space thresholds.
pub const FIRST_GENUS: u32 = 5;
/// Last genus for which the question is open; from 24 on the quotient is
/// known to be of general type.
pub const LAST_GENUS: u32 = 23;

/// Main table, `g = 5..=23`.
pub const THM2_N_MIN: [u32; 19] = [9, 9, 8, 8, 8, 6, 6, 6, 6, 5, 6, 5, 5, 5, 4, 4, 2, 2, 1];
pub const THM2_N_MAX: [u32; 19] = [10, 14, 18, 21, 25, 28, 32, 35, 38, 42, 46, 49, 52, 56, 60, 63, 66, 70, 74];

/// Weierstrass-route table, `g = 7..=23`.
pub const PROP51_FIRST_GENUS: u32 = 7;
pub const PROP51_N_MIN: [u32; 17] = [9, 8, 8, 8, 6, 7, 6, 6, 6, 6, 5, 6, 4, 4, 3, 4, 1];
pub const PROP51_N_MAX: [u32; 17] = [10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34, 36, 38, 40, 42];

/// Combined Weierstrass and marked-series table, `g = 5..=23`.
pub const PROP52_N_MIN: [u32; 19] = [9, 9, 8, 8, 8, 8, 6, 7, 6, 6, 6, 6, 5, 6, 4, 4, 3, 4, 1];
pub const PROP52_N_MAX: [u32; 19] = THM2_N_MAX;

/// Smallest `n` for which the moduli space of genus-`g` curves with `2n`
/// points is known to be of general type, `g = 5..=23`.
pub const MG2N_THRESHOLD: [u32; 19] = [8, 8, 8, 7, 7, 6, 6, 6, 6, 5, 5, 5, 5, 5, 4, 3, 2, 2, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    Thm2,
    Prop51,
    Prop52,
    Mg2nReference,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [TableKind::Thm2, TableKind::Prop51, TableKind::Prop52, TableKind::Mg2nReference];

    pub fn as_str(&self) -> &'static str {
        match self {
            TableKind::Thm2 => "thm2",
            TableKind::Prop51 => "prop51",
            TableKind::Prop52 => "prop52",
            TableKind::Mg2nReference => "mg2n_reference",
        }
    }

    pub fn parse(s: &str) -> Option<TableKind> {
        TableKind::ALL.into_iter().find(|t| t.as_str() == s)
    }

    pub fn genera(&self) -> std::ops::RangeInclusive<u32> {
        match self {
            TableKind::Prop51 => PROP51_FIRST_GENUS..=LAST_GENUS,
            _ => FIRST_GENUS..=LAST_GENUS,
        }
    }
}

/// Published `(n_min, n_max)` for one genus. The threshold table has no
/// upper end and reports `None` there.
pub fn known_row(kind: TableKind, g: u32) -> Option<(u32, Option<u32>)> {
    if !kind.genera().contains(&g) {
        return None;
    }
    let first = *kind.genera().start();
    let i = (g - first) as usize;
    Some(match kind {
        TableKind::Thm2 => (THM2_N_MIN[i], Some(THM2_N_MAX[i])),
        TableKind::Prop51 => (PROP51_N_MIN[i], Some(PROP51_N_MAX[i])),
        TableKind::Prop52 => (PROP52_N_MIN[i], Some(PROP52_N_MAX[i])),
        TableKind::Mg2nReference => (MG2N_THRESHOLD[i], None),
    })
}

/// Threshold below which the quotient is not attempted.
pub fn mg2n_threshold(g: u32) -> Option<u32> {
    known_row(TableKind::Mg2nReference, g).map(|(t, _)| t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weierstrass_upper_end_is_2g_minus_4() {
        for g in TableKind::Prop51.genera() {
            assert_eq!(known_row(TableKind::Prop51, g).unwrap().1, Some(2 * g - 4));
        }
    }

    #[test]
    fn lookups() {
        assert_eq!(known_row(TableKind::Thm2, 5), Some((9, Some(10))));
        assert_eq!(known_row(TableKind::Thm2, 23), Some((1, Some(74))));
        assert_eq!(known_row(TableKind::Prop51, 6), None);
        assert_eq!(mg2n_threshold(21), Some(2));
        assert_eq!(mg2n_threshold(24), None);
        for t in TableKind::ALL {
            assert_eq!(TableKind::parse(t.as_str()), Some(t));
        }
    }
}

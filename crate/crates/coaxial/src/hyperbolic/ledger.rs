//! Volumes as powers of two times the volume of the tile `T_H`.
//!
//! `T_H` is one octant of the ideal right-angled octahedron. Each entry is
//! a power of two times another entry; the manifold covers `Ž(P)` are
//! `2^n` copies of the hyperbolic polyhedron with `n` facets.

use serde::Serialize;

use super::octahedron;
use super::volume::ideal_polyhedron_volume;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub name: &'static str,
    /// `(base, e)` when the volume is `2^e` times that of `base`.
    pub multiple_of: Option<(&'static str, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeLedger {
    pub entries: Vec<LedgerEntry>,
    /// `vol(T_H)`, an eighth of the ideal octahedron.
    pub unit_volume: f64,
}

pub fn volume_ledger() -> VolumeLedger {
    let e = |name, base: Option<(&'static str, u32)>| LedgerEntry { name, multiple_of: base };
    let entries = vec![
        e("T_H", None),
        e("BP_H", Some(("T_H", 1))),
        e("P_O", Some(("T_H", 3))),
        e("RD_H", Some(("BP_H", 3))),
        e("Ž(BP3)", Some(("BP_H", 6))),
        e("Ž(P_O)", Some(("P_O", 8))),
        e("Ž(RD)", Some(("RD_H", 12))),
    ];
    let octahedron = ideal_polyhedron_volume(&octahedron()).expect("ideal octahedron");
    VolumeLedger { entries, unit_volume: octahedron / 8.0 }
}

impl VolumeLedger {
    fn entry(&self, name: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// The chain `vol(name) = 2^a1 vol(b1) = 2^a2 vol(b2) = ...` down to `T_H`.
    pub fn chain(&self, name: &str) -> Option<Vec<(&'static str, u32)>> {
        let mut out = Vec::new();
        let mut cur = self.entry(name)?;
        let mut total = 0;
        while let Some((base, e)) = cur.multiple_of {
            total += e;
            out.push((base, total));
            cur = self.entry(base)?;
        }
        Some(out)
    }

    /// `log_2 (vol / vol(T_H))`.
    pub fn exponent(&self, name: &str) -> Option<u32> {
        let c = self.chain(name)?;
        Some(c.last().map_or(0, |&(_, e)| e))
    }

    /// `log_2 (vol(a) / vol(b))`.
    pub fn ratio_exponent(&self, a: &str, b: &str) -> Option<i64> {
        Some(i64::from(self.exponent(a)?) - i64::from(self.exponent(b)?))
    }

    pub fn volume(&self, name: &str) -> Option<f64> {
        Some(self.unit_volume * 2f64.powi(self.exponent(name)? as i32))
    }

    pub fn render_chain(&self, name: &str) -> Option<String> {
        let parts: Vec<String> = self
            .chain(name)?
            .into_iter()
            .map(|(b, e)| if e == 1 { format!("2 vol({b})") } else { format!("2^{e} vol({b})") })
            .collect();
        Some(std::iter::once(format!("vol({name})")).chain(parts).collect::<Vec<_>>().join(" = "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let l = volume_ledger();
        let got: Vec<u32> = l.entries.iter().map(|e| l.exponent(e.name).unwrap()).collect();
        assert_eq!(got, [0, 1, 3, 4, 7, 11, 16]);
        assert_eq!(l.ratio_exponent("Ž(P_O)", "Ž(BP3)"), Some(4));
        assert_eq!(l.ratio_exponent("Ž(RD)", "Ž(BP3)"), Some(9));
        assert_eq!(l.ratio_exponent("Ž(RD)", "Ž(P_O)"), Some(5));
        assert_eq!(
            l.render_chain("Ž(RD)").unwrap(),
            "vol(Ž(RD)) = 2^12 vol(RD_H) = 2^15 vol(BP_H) = 2^16 vol(T_H)"
        );
        assert!((l.unit_volume - 0.457_982_8).abs() < 1e-7);
    }
}

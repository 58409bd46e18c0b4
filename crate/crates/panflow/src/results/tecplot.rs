//! Tecplot ASCII export: POINT-ordered structured zones and a macro that
//! draws them.

use std::fmt::Write as _;

use super::agps::AgpsDocument;
use super::sci;

#[derive(Debug, Clone, PartialEq)]
pub enum CaseSelection {
    All,
    Alphas(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TecplotError {
    #[error("no case at alpha {0}")]
    UnknownCase(f64),
}

fn selected(doc: &AgpsDocument, sel: &CaseSelection) -> Result<Vec<usize>, TecplotError> {
    match sel {
        CaseSelection::All => Ok((0..doc.alphas.len()).collect()),
        CaseSelection::Alphas(a) => a
            .iter()
            .map(|x| doc.case_index(*x).ok_or(TecplotError::UnknownCase(*x)))
            .collect(),
    }
}

/// One zone per network per selected case, cases outermost. `I` runs along
/// a grid row (columns), `J` down the rows.
pub fn write_tecplot_dat(doc: &AgpsDocument, sel: &CaseSelection) -> Result<String, TecplotError> {
    let cases = selected(doc, sel)?;
    let mut s = String::new();
    let _ = writeln!(s, "TITLE = \"{}\"", doc.title.replace('"', "'"));
    s.push_str("VARIABLES = \"X\" \"Y\" \"Z\" \"CP\"\n");
    for c in cases {
        let alpha = doc.alphas[c];
        for n in &doc.networks {
            let _ = writeln!(
                s,
                "ZONE T=\"{} ALPHA={}\", I={}, J={}, DATAPACKING=POINT",
                n.name,
                sci(alpha),
                n.n_cols,
                n.n_rows
            );
            for (p, cp) in n.points.iter().zip(&n.cp[c]) {
                let _ = writeln!(s, "{} {} {} {}", sci(p.x), sci(p.y), sci(p.z), sci(*cp));
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewPreset {
    Isometric,
    Planform,
}

impl ViewPreset {
    pub const DEFAULT: [ViewPreset; 2] = [ViewPreset::Isometric, ViewPreset::Planform];

    fn name(self) -> &'static str {
        match self {
            ViewPreset::Isometric => "isometric",
            ViewPreset::Planform => "planform",
        }
    }

    /// Psi, theta and alpha view angles in degrees.
    fn angles(self) -> (f64, f64, f64) {
        match self {
            ViewPreset::Isometric => (60.0, -135.0, 0.0),
            ViewPreset::Planform => (0.0, 0.0, 0.0),
        }
    }
}

/// Macro that loads `dat_file` and exports one pressure-contour frame per
/// case, then the view presets with the wake zones shown. `zones_per_case`
/// is the network count of the data file.
pub fn write_macro(
    dat_file: &str,
    zones_per_case: usize,
    alphas: &[f64],
    views: &[ViewPreset],
) -> String {
    let mut s = String::from("#!MC 1410\n");
    let _ = writeln!(
        s,
        "$!READDATASET '\"{dat_file}\"' READDATAOPTION = NEW RESETSTYLE = YES"
    );
    s.push_str("$!PLOTTYPE = CARTESIAN3D\n");
    for (k, a) in alphas.iter().enumerate() {
        let first = k * zones_per_case + 1;
        let last = first + zones_per_case - 1;
        let _ = writeln!(s, "# contour alpha={}", sci(*a));
        let _ = writeln!(s, "$!ACTIVEFIELDMAPS = [{first}-{last}]");
        s.push_str("$!GLOBALCONTOUR 1 VAR = 4\n");
        s.push_str("$!FIELDLAYERS SHOWCONTOUR = YES\n");
        s.push_str("$!VIEW FIT\n");
        let _ = writeln!(s, "$!EXPORTSETUP EXPORTFNAME = 'cp_case{:02}.png'", k + 1);
        s.push_str("$!EXPORT\n");
    }
    for v in views {
        let (psi, theta, alpha) = v.angles();
        let _ = writeln!(s, "# view {}", v.name());
        if zones_per_case > 0 {
            let _ = writeln!(s, "$!ACTIVEFIELDMAPS = [1-{zones_per_case}]");
        }
        let _ = writeln!(
            s,
            "$!THREEDVIEW PSIANGLE = {psi} THETAANGLE = {theta} ALPHAANGLE = {alpha}"
        );
        s.push_str("$!FIELDLAYERS SHOWMESH = YES\n");
        s.push_str("$!VIEW FIT\n");
        let _ = writeln!(s, "$!EXPORTSETUP EXPORTFNAME = '{}.png'", v.name());
        s.push_str("$!EXPORT\n");
    }
    s
}

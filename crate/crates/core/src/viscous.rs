//! Turbulent flat-plate skin friction and the parasite drag build-up.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Sea-level standard temperature, K.
pub const T_SEA_LEVEL: f64 = 288.15;
/// Sutherland constant for air, K.
pub const SUTHERLAND_S: f64 = 110.4;

#[derive(Debug, Clone, PartialEq)]
pub enum ViscousError {
    OutOfValidityRange { what: &'static str, value: f64 },
    NoComponents,
    BadReferenceArea(f64),
    BadItem { name: String, what: &'static str },
}

impl fmt::Display for ViscousError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViscousError::OutOfValidityRange { what, value } => {
                write!(
                    f,
                    "{what} = {value} is outside the turbulent correlation's range"
                )
            }
            ViscousError::NoComponents => write!(f, "no wetted components given"),
            ViscousError::BadReferenceArea(s) => write!(f, "reference area {s} must be positive"),
            ViscousError::BadItem { name, what } => write!(f, "component {name}: {what}"),
        }
    }
}

impl core::error::Error for ViscousError {}

/// Schlichting's incompressible turbulent flat-plate mean skin friction.
pub fn schlichting_cf(re: f64) -> f64 {
    0.455 / math::powf(math::log10(re), 2.58)
}

/// Reference-temperature ratio `T'/T`.
pub fn reference_temperature_ratio(mach: f64, tw_over_t: f64) -> f64 {
    1.0 + 0.035 * mach * mach + 0.45 * (tw_over_t - 1.0)
}

fn sutherland_ratio(t_ratio: f64) -> f64 {
    // mu(T') / mu(T) with T' = t_ratio * T
    let t = T_SEA_LEVEL;
    math::powf(t_ratio, 1.5) * (t + SUTHERLAND_S) / (t_ratio * t + SUTHERLAND_S)
}

/// Compressible turbulent flat-plate skin friction by the reference
/// temperature method.
///
/// The incompressible correlation is evaluated at the Reynolds number based on
/// reference-temperature density and viscosity, and the result is scaled by
/// `T / T'`. At `M = 0` with an adiabatic-cool wall (`Tw/T = 1`) it reduces to
/// [`schlichting_cf`] exactly.
pub fn sommer_short_cf(re: f64, mach: f64, tw_over_t: f64) -> Result<f64, ViscousError> {
    if !(re > 1e5) || !re.is_finite() {
        return Err(ViscousError::OutOfValidityRange {
            what: "Re",
            value: re,
        });
    }
    if !(0.0..0.8).contains(&mach) {
        return Err(ViscousError::OutOfValidityRange {
            what: "Mach",
            value: mach,
        });
    }
    if !(tw_over_t > 0.0) {
        return Err(ViscousError::OutOfValidityRange {
            what: "Tw/T",
            value: tw_over_t,
        });
    }
    let tr = reference_temperature_ratio(mach, tw_over_t);
    if !(tr > 0.0) {
        return Err(ViscousError::OutOfValidityRange {
            what: "T'/T",
            value: tr,
        });
    }
    if tr == 1.0 {
        return Ok(schlichting_cf(re));
    }
    let re_ref = re / tr / sutherland_ratio(tr);
    Ok(schlichting_cf(re_ref) / tr)
}

/// One wetted component of the drag build-up.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentWettedItem {
    pub name: String,
    pub wetted_area: f64,
    pub characteristic_length: f64,
    pub form_factor: f64,
    pub tw_over_t: f64,
}

impl ComponentWettedItem {
    pub fn new(name: impl Into<String>, wetted_area: f64, characteristic_length: f64) -> Self {
        ComponentWettedItem {
            name: name.into(),
            wetted_area,
            characteristic_length,
            form_factor: 1.0,
            tw_over_t: 1.0,
        }
    }

    pub fn with_form_factor(mut self, ff: f64) -> Self {
        self.form_factor = ff;
        self
    }
}

/// Freestream for the build-up: Mach number and Reynolds number per unit
/// length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousFlight {
    pub mach: f64,
    pub re_per_length: f64,
}

impl ViscousFlight {
    /// Reynolds number `re` quoted on `length`.
    pub fn from_reference(mach: f64, re: f64, length: f64) -> Self {
        ViscousFlight {
            mach,
            re_per_length: re / length,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDrag {
    pub name: String,
    pub reynolds: f64,
    pub cf: f64,
    pub form_factor: f64,
    pub wetted_area: f64,
    pub cd0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParasiteDrag {
    pub cd0: f64,
    pub sref: f64,
    pub components: Vec<ComponentDrag>,
}

/// `CD0 = Σ Cf_i · FF_i · Swet_i / sref`, with each `Cf_i` from
/// [`sommer_short_cf`] at the component's own length Reynolds number.
pub fn parasite_drag(
    items: &[ComponentWettedItem],
    flight: ViscousFlight,
    sref: f64,
) -> Result<ParasiteDrag, ViscousError> {
    if items.is_empty() {
        return Err(ViscousError::NoComponents);
    }
    if !(sref > 0.0) {
        return Err(ViscousError::BadReferenceArea(sref));
    }
    let mut components = Vec::with_capacity(items.len());
    let mut cd0 = 0.0;
    for it in items {
        let bad = |what| ViscousError::BadItem {
            name: it.name.clone(),
            what,
        };
        if !(it.wetted_area > 0.0) {
            return Err(bad("wetted area must be positive"));
        }
        if !(it.characteristic_length > 0.0) {
            return Err(bad("characteristic length must be positive"));
        }
        if !(it.form_factor >= 1.0) {
            return Err(bad("form factor must be at least 1"));
        }
        let re = flight.re_per_length * it.characteristic_length;
        let cf = sommer_short_cf(re, flight.mach, it.tw_over_t)?;
        let cd = cf * it.form_factor * it.wetted_area / sref;
        cd0 += cd;
        components.push(ComponentDrag {
            name: it.name.clone(),
            reynolds: re,
            cf,
            form_factor: it.form_factor,
            wetted_area: it.wetted_area,
            cd0: cd,
        });
    }
    Ok(ParasiteDrag {
        cd0,
        sref,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incompressible_limit_is_exact() {
        let cf = sommer_short_cf(2e6, 0.0, 1.0).unwrap();
        assert_eq!(cf, schlichting_cf(2e6));
    }

    #[test]
    fn rejects_laminar_range_and_transonic() {
        assert!(sommer_short_cf(5e4, 0.1, 1.0).is_err());
        assert!(sommer_short_cf(1e6, 0.85, 1.0).is_err());
    }

    #[test]
    fn single_plate_gives_cf() {
        let item = ComponentWettedItem::new("plate", 10.0, 2.0);
        let flight = ViscousFlight::from_reference(0.0, 2e6, 2.0);
        let d = parasite_drag(&[item], flight, 10.0).unwrap();
        assert_eq!(d.cd0, schlichting_cf(2e6));
    }
}

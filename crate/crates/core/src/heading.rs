//! CoSSMic column headings, e.g. `DE_KN_industrial1_pv_1`:
//! country `DE`, city `KN`, site `industrial1`, device `pv`, instance `1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeadingError {
    #[error("heading {0:?} has fewer than 4 underscore-separated parts")]
    TooFewParts(String),
    #[error("heading {heading:?}: invalid {component} {value:?}")]
    Component {
        heading: String,
        component: &'static str,
        value: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SiteKind {
    Industrial,
    Residential,
    Public,
}

impl SiteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SiteKind::Industrial => "industrial",
            SiteKind::Residential => "residential",
            SiteKind::Public => "public",
        }
    }
}

impl FromStr for SiteKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "industrial" => Ok(SiteKind::Industrial),
            "residential" => Ok(SiteKind::Residential),
            "public" => Ok(SiteKind::Public),
            _ => Err(()),
        }
    }
}

/// Country and city codes, e.g. `DE` / `KN`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Region {
    pub country: String,
    pub city: String,
}

impl Region {
    pub fn new(country: impl Into<String>, city: impl Into<String>) -> Self {
        Region {
            country: country.into(),
            city: city.into(),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.country, self.city)
    }
}

impl FromStr for Region {
    type Err = HeadingError;

    fn from_str(s: &str) -> Result<Self, HeadingError> {
        let (country, city) = s.split_once('_').ok_or_else(|| HeadingError::Component {
            heading: s.to_owned(),
            component: "region",
            value: s.to_owned(),
        })?;
        check_code(s, "country", country)?;
        check_code(s, "city", city)?;
        Ok(Region::new(country, city))
    }
}

/// A building or site inside a region: `industrial1`, `residential4`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub region: Region,
    pub kind: SiteKind,
    pub index: u32,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}{}", self.region, self.kind.as_str(), self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeviceHeading {
    raw: String,
    pub site: Site,
    pub device_segments: Vec<String>,
    pub instance_index: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeviceRole {
    Producer,
    Consumer,
    GridImport,
    GridExport,
}

impl DeviceHeading {
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn region(&self) -> &Region {
        &self.site.region
    }

    /// Rebuilds the heading text from its parts.
    pub fn reconstruct(&self) -> String {
        let mut s = format!("{}_{}", self.site, self.device_segments.join("_"));
        if let Some(i) = self.instance_index {
            s.push_str(&format!("_{i}"));
        }
        s
    }

    /// Device name without the instance suffix, e.g. `heat_pump`.
    pub fn device_name(&self) -> String {
        self.device_segments.join("_")
    }

    pub fn role(&self) -> DeviceRole {
        classify(self)
    }
}

impl fmt::Display for DeviceHeading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for DeviceHeading {
    type Err = HeadingError;

    fn from_str(s: &str) -> Result<Self, HeadingError> {
        parse_heading(s)
    }
}

fn check_code(heading: &str, component: &'static str, value: &str) -> Result<(), HeadingError> {
    if value.len() == 2 && value.bytes().all(|b| b.is_ascii_uppercase()) {
        Ok(())
    } else {
        Err(HeadingError::Component {
            heading: heading.to_owned(),
            component,
            value: value.to_owned(),
        })
    }
}

pub fn parse_heading(text: &str) -> Result<DeviceHeading, HeadingError> {
    let parts: Vec<&str> = text.split('_').collect();
    if parts.len() < 4 {
        return Err(HeadingError::TooFewParts(text.to_owned()));
    }
    let component = |component, value: &str| HeadingError::Component {
        heading: text.to_owned(),
        component,
        value: value.to_owned(),
    };
    check_code(text, "country", parts[0])?;
    check_code(text, "city", parts[1])?;

    let site = parts[2];
    let digits_at = site
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| component("site index", site))?;
    let (kind, index) = site.split_at(digits_at);
    let kind: SiteKind = kind.parse().map_err(|_| component("site kind", kind))?;
    let index: u32 = index
        .parse()
        .ok()
        .filter(|&i| i > 0)
        .ok_or_else(|| component("site index", index))?;

    let mut rest: Vec<&str> = parts[3..].to_vec();
    let mut instance_index = None;
    if rest.len() > 1 {
        let last = rest[rest.len() - 1];
        if !last.is_empty() && last.bytes().all(|b| b.is_ascii_digit()) {
            let i: u32 = last
                .parse()
                .map_err(|_| component("instance index", last))?;
            if i == 0 {
                return Err(component("instance index", last));
            }
            instance_index = Some(i);
            rest.pop();
        }
    }
    for seg in &rest {
        if seg.is_empty()
            || !seg
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
        {
            return Err(component("device segment", seg));
        }
    }
    let heading = DeviceHeading {
        raw: text.to_owned(),
        site: Site {
            region: Region::new(parts[0], parts[1]),
            kind,
            index,
        },
        device_segments: rest.into_iter().map(str::to_owned).collect(),
        instance_index,
    };
    // Leading zeros would break reconstruction ("residential01").
    if heading.reconstruct() != text {
        return Err(component("site index", parts[2]));
    }
    Ok(heading)
}

/// Power-system role: `pv*` produces, grid import/export connect to the grid,
/// everything else consumes.
pub fn classify(h: &DeviceHeading) -> DeviceRole {
    let segs: Vec<&str> = h.device_segments.iter().map(String::as_str).collect();
    match segs.as_slice() {
        [first, ..] if first.starts_with("pv") => DeviceRole::Producer,
        ["grid", "import"] => DeviceRole::GridImport,
        ["grid", "export"] => DeviceRole::GridExport,
        _ => DeviceRole::Consumer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn industrial_pv_with_instance() {
        let h = parse_heading("DE_KN_industrial1_pv_1").unwrap();
        assert_eq!(h.region(), &Region::new("DE", "KN"));
        assert_eq!(h.site.kind, SiteKind::Industrial);
        assert_eq!(h.site.index, 1);
        assert_eq!(h.device_segments, vec!["pv"]);
        assert_eq!(h.instance_index, Some(1));
    }

    #[test]
    fn grid_import_without_instance() {
        let h = parse_heading("DE_KN_residential4_grid_import").unwrap();
        assert_eq!(h.site.kind, SiteKind::Residential);
        assert_eq!(h.site.index, 4);
        assert_eq!(h.device_segments, vec!["grid", "import"]);
        assert_eq!(h.instance_index, None);
    }

    #[test]
    fn too_few_parts() {
        assert_eq!(
            parse_heading("DE_KN"),
            Err(HeadingError::TooFewParts("DE_KN".into()))
        );
    }

    #[test]
    fn offending_component_named() {
        let err = parse_heading("DE_KN_farm1_pv").unwrap_err();
        assert!(matches!(
            err,
            HeadingError::Component {
                component: "site kind",
                ..
            }
        ));
        let err = parse_heading("DE_KN_industrial_pv").unwrap_err();
        assert!(matches!(
            err,
            HeadingError::Component {
                component: "site index",
                ..
            }
        ));
        let err = parse_heading("DE_KN_industrial0_pv").unwrap_err();
        assert!(matches!(
            err,
            HeadingError::Component {
                component: "site index",
                ..
            }
        ));
        let err = parse_heading("DE_KN_industrial01_pv").unwrap_err();
        assert!(matches!(
            err,
            HeadingError::Component {
                component: "site index",
                ..
            }
        ));
        let err = parse_heading("de_KN_industrial1_pv").unwrap_err();
        assert!(matches!(
            err,
            HeadingError::Component {
                component: "country",
                ..
            }
        ));
    }

    #[test]
    fn lone_number_is_a_device_segment() {
        let h = parse_heading("DE_KN_public1_7").unwrap();
        assert_eq!(h.device_segments, vec!["7"]);
        assert_eq!(h.instance_index, None);
    }

    #[test]
    fn roles() {
        let role = |s: &str| classify(&parse_heading(s).unwrap());
        assert_eq!(role("DE_KN_residential1_pv"), DeviceRole::Producer);
        assert_eq!(role("DE_KN_industrial3_pv_facade"), DeviceRole::Producer);
        assert_eq!(
            role("DE_KN_residential1_washing_machine"),
            DeviceRole::Consumer
        );
        assert_eq!(
            role("DE_KN_residential4_grid_export"),
            DeviceRole::GridExport
        );
        assert_eq!(
            role("DE_KN_residential4_grid_import"),
            DeviceRole::GridImport
        );
        assert_eq!(role("DE_KN_residential4_ev"), DeviceRole::Consumer);
    }
}

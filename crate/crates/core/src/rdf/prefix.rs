use super::term::Iri;
use super::vocab;
use super::RdfError;

/// Ordered prefix declarations plus an optional base IRI.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    base: Option<Iri>,
    entries: Vec<(String, Iri)>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// `rdf`, `xsd`, `seas`, `sosa`, `prov` and `qudt`, with the given base.
    pub fn standard(base: Option<Iri>) -> Self {
        let mut map = PrefixMap::new();
        map.base = base;
        for (p, ns) in [
            ("rdf", vocab::RDF_NS),
            ("xsd", vocab::XSD_NS),
            ("seas", vocab::SEAS_NS),
            ("sosa", vocab::SOSA_NS),
            ("prov", vocab::PROV_NS),
            ("qudt", vocab::QUDT_NS),
        ] {
            map.insert(p, Iri::new_unchecked(ns));
        }
        map
    }

    pub fn base(&self) -> Option<&Iri> {
        self.base.as_ref()
    }

    pub fn set_base(&mut self, base: Option<Iri>) {
        self.base = base;
    }

    /// Declares or redeclares a prefix. Redeclaration keeps the original position.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: Iri) {
        let prefix = prefix.into();
        match self.entries.iter_mut().find(|(p, _)| *p == prefix) {
            Some(entry) => entry.1 = namespace,
            None => self.entries.push((prefix, namespace)),
        }
    }

    pub fn get(&self, prefix: &str) -> Option<&Iri> {
        self.entries
            .iter()
            .find(|(p, _)| p == prefix)
            .map(|(_, ns)| ns)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(p, ns)| (p.as_str(), ns))
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Result<Iri, RdfError> {
        let ns = self
            .get(prefix)
            .ok_or_else(|| RdfError::UndefinedPrefix(prefix.to_owned()))?;
        Iri::new(format!("{}{}", ns.as_str(), local))
    }

    /// `prefix:local` for the longest matching namespace whose remainder is a
    /// conservative local name.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(p, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                is_safe_local(local).then_some((ns.as_str().len(), p, local))
            })
            .max_by_key(|(len, _, _)| *len)
            .map(|(_, p, local)| format!("{p}:{local}"))
    }
}

fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        _ => false,
    }
}

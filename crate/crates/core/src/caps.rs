use serde::{Deserialize, Serialize};

/// Size limits for the exponential or memory-hungry routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub max_vertices: usize,
    pub pattern_vertices: usize,
    pub quotient_vertices: usize,
    pub canonical_vertices: usize,
    pub dense_spectrum: usize,
    pub matching_edges: usize,
    pub matching_width: usize,
    pub chromatic_edges: usize,
    pub walk_length: usize,
    pub hypercube_dimension: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 1 << 21,
            pattern_vertices: 10,
            quotient_vertices: 7,
            canonical_vertices: 64,
            dense_spectrum: 4096,
            matching_edges: 48,
            matching_width: 20,
            chromatic_edges: 40,
            walk_length: 16,
            hypercube_dimension: 20,
        }
    }
}

impl Caps {
    /// Applies `key=value` overrides, comma separated.
    pub fn with_overrides(mut self, spec: &str) -> crate::Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| crate::Error::Parse(format!("cap override `{item}` lacks `=`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("cap `{key}` needs an integer")))?;
            let slot = match key.trim() {
                "max_vertices" => &mut self.max_vertices,
                "pattern_vertices" => &mut self.pattern_vertices,
                "quotient_vertices" => &mut self.quotient_vertices,
                "canonical_vertices" => &mut self.canonical_vertices,
                "dense_spectrum" => &mut self.dense_spectrum,
                "matching_edges" => &mut self.matching_edges,
                "matching_width" => &mut self.matching_width,
                "chromatic_edges" => &mut self.chromatic_edges,
                "walk_length" => &mut self.walk_length,
                "hypercube_dimension" => &mut self.hypercube_dimension,
                other => return Err(crate::Error::Parse(format!("unknown cap `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let c = Caps::default()
            .with_overrides("pattern_vertices=8, walk_length=12")
            .unwrap();
        assert_eq!(c.pattern_vertices, 8);
        assert_eq!(c.walk_length, 12);
        assert!(Caps::default().with_overrides("bogus=1").is_err());
        assert!(Caps::default().with_overrides("walk_length").is_err());
    }
}

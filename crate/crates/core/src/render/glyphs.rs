use std::sync::OnceLock;

use serde::Deserialize;

use super::RenderError;

const SHIPPED_GLYPHS: &str = include_str!("../../assets/glyphs/glyphs.toml");

/// License of the shipped glyph artwork.
pub const GLYPH_LICENSE: &str = "Apache-2.0";

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Glyph {
    pub id: String,
    pub title: String,
    pub paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlyphSet {
    pub version: u32,
    pub view_box: String,
    #[serde(rename = "glyph")]
    pub glyphs: Vec<Glyph>,
}

impl GlyphSet {
    pub fn shipped() -> &'static GlyphSet {
        static SET: OnceLock<GlyphSet> = OnceLock::new();
        SET.get_or_init(|| toml::from_str(SHIPPED_GLYPHS).expect("shipped glyph file parses"))
    }

    pub fn get(&self, id: &str) -> Result<&Glyph, RenderError> {
        self.glyphs
            .iter()
            .find(|g| g.id == id)
            .ok_or_else(|| RenderError::UnknownGlyph(id.to_string()))
    }
}

use super::glyphs::GlyphSet;
use super::html::caption;
use super::{escape_xml as esc, foreground_for, icon_label, Block, LayoutCondition, RenderError, TITLE};
use crate::hazard::{HazardIcon, IconSet};

const WIDTH: u32 = 720;
const MARGIN: u32 = 20;
const LINE: u32 = 20;
const WRAP: usize = 88;
const ICON: u32 = 48;
const ICON_PITCH: u32 = 132;
const ICON_ROW: u32 = ICON + 30;

const STYLE: &str = "text { font-family: Helvetica, Arial, sans-serif; font-size: 14px; fill: #1a1a1a; } \
.title { font-size: 20px; font-weight: bold; } .meta { font-size: 12px; fill: #555555; } \
.heading { font-size: 16px; font-weight: bold; } .icon-caption { font-size: 11px; }";

/// Greedy word wrap; a word longer than `width` gets a line of its own.
pub(crate) fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut cur = String::new();
    for word in text.split_whitespace() {
        if !cur.is_empty() && cur.chars().count() + 1 + word.chars().count() > width {
            lines.push(std::mem::take(&mut cur));
        }
        if !cur.is_empty() {
            cur.push(' ');
        }
        cur.push_str(word);
    }
    if !cur.is_empty() || lines.is_empty() {
        lines.push(cur);
    }
    lines
}

fn icon_body(icon: &HazardIcon, glyphs: &GlyphSet) -> Result<String, RenderError> {
    let glyph = glyphs.get(&icon.glyph_id)?;
    let mut s = format!(
        "<title>{}</title><rect width=\"{ICON}\" height=\"{ICON}\" rx=\"6\" fill=\"{}\"/>",
        esc(&icon_label(icon)),
        icon.color
    );
    s.push_str(&format!(
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"3\" stroke-linecap=\"round\" stroke-linejoin=\"round\">",
        foreground_for(&icon.color)
    ));
    for p in &glyph.paths {
        s.push_str(&format!("<path d=\"{p}\"/>"));
    }
    s.push_str("</g>");
    Ok(s)
}

/// Standalone `<svg>` for one icon, or a positioned `<g>` when `at` is set.
pub(super) fn icon_fragment(icon: &HazardIcon, glyphs: &GlyphSet, at: Option<(&str, u32)>) -> Result<String, RenderError> {
    let label = esc(&icon_label(icon));
    let body = icon_body(icon, glyphs)?;
    Ok(match at {
        None => format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{ICON}\" height=\"{ICON}\" viewBox=\"{}\" role=\"img\" aria-label=\"{label}\">{body}</svg>",
            glyphs.view_box
        ),
        Some((id, x)) => format!(
            "<g id=\"{}\" transform=\"translate({x},0)\" role=\"img\" aria-label=\"{label}\">{body}<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" class=\"icon-caption\">{}</text></g>",
            esc(id),
            ICON / 2,
            ICON + 16,
            esc(&caption(icon))
        ),
    })
}

struct Canvas {
    body: String,
    y: u32,
}

impl Canvas {
    fn text(&mut self, id: Option<(&str, &str)>, class: &str, text: &str) {
        let attrs = id
            .map(|(i, s)| format!(" id=\"{}\" data-source=\"{}\"", esc(i), esc(s)))
            .unwrap_or_default();
        let lines = wrap(text, WRAP);
        if lines.len() == 1 {
            self.y += LINE;
            self.body.push_str(&format!(
                "<text{attrs} x=\"{MARGIN}\" y=\"{}\" class=\"{class}\">{}</text>\n",
                self.y,
                esc(&lines[0])
            ));
            return;
        }
        self.body.push_str(&format!("<text{attrs} class=\"{class}\">\n"));
        for l in lines {
            self.y += LINE;
            self.body
                .push_str(&format!("<tspan x=\"{MARGIN}\" y=\"{}\">{}</tspan>\n", self.y, esc(&l)));
        }
        self.body.push_str("</text>\n");
    }

    fn icon_row(&mut self, id: &str, source: &str, caption: &str, icons: &IconSet, glyphs: &GlyphSet) -> Result<(), RenderError> {
        let open = format!(
            "<g id=\"{}\" data-source=\"{}\" aria-label=\"{}\" transform=\"translate({MARGIN},{})\"",
            esc(id),
            esc(source),
            esc(caption),
            self.y + 8
        );
        if icons.is_empty() {
            self.body.push_str(&open);
            self.body.push_str("/>\n");
            return Ok(());
        }
        self.body.push_str(&open);
        self.body.push('>');
        for (k, icon) in icons.iter().enumerate() {
            let icon_id = format!("{id}-{k}");
            self.body
                .push_str(&icon_fragment(icon, glyphs, Some((&icon_id, k as u32 * ICON_PITCH)))?);
        }
        self.body.push_str("</g>\n");
        self.y += ICON_ROW;
        Ok(())
    }

    fn gap(&mut self) {
        self.y += LINE / 2;
    }
}

pub(super) fn write(blocks: &[Block], condition: LayoutCondition, glyphs: &GlyphSet) -> Result<String, RenderError> {
    let mut c = Canvas {
        body: String::new(),
        y: 12,
    };
    for block in blocks {
        match block {
            Block::Header { rows } => {
                c.y += 8;
                c.text(None, "title", TITLE);
                for r in rows {
                    c.text(Some((&r.id, &r.source)), "meta", &r.text);
                }
            }
            Block::IconRow {
                id,
                source,
                caption,
                icons,
            } => {
                c.icon_row(id, source, caption, icons, glyphs)?;
                if icons.is_empty() {
                    continue;
                }
            }
            Block::Summary { id, text } => {
                c.body.push_str(&format!("<g id=\"{id}\" data-source=\"summary_text\">\n"));
                c.text(None, "heading", "Summary");
                c.text(None, "body", text);
                c.body.push_str("</g>\n");
            }
            Block::Period {
                id,
                source,
                label,
                icons,
                rows,
            } => {
                c.body
                    .push_str(&format!("<g id=\"{id}\" data-source=\"{}\">\n", esc(source)));
                c.text(None, "heading", label);
                if let Some((icon_id, set)) = icons {
                    let src = format!("derived:{}", source.trim_end_matches(".label"));
                    c.icon_row(icon_id, &src, &format!("Hazards, {label}"), set, glyphs)?;
                }
                for r in rows {
                    c.text(Some((&r.id, &r.source)), "body", &r.text);
                }
                c.body.push_str("</g>\n");
            }
        }
        c.gap();
    }
    let height = c.y + MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\" role=\"document\" data-condition=\"{condition}\">\n"
    );
    out.push_str(&format!("<title>{TITLE}</title>\n<style>{STYLE}</style>\n"));
    out.push_str(&format!("<rect width=\"{WIDTH}\" height=\"{height}\" fill=\"#ffffff\"/>\n"));
    out.push_str(&c.body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::wrap;

    #[test]
    fn wrapping() {
        assert_eq!(wrap("", 10), vec![String::new()]);
        assert_eq!(wrap("aa bb cc", 5), vec!["aa bb", "cc"]);
        assert_eq!(wrap("abcdefghijk x", 5), vec!["abcdefghijk", "x"]);
        let long = "word ".repeat(100);
        assert!(wrap(&long, 88).iter().all(|l| l.chars().count() <= 88));
    }
}

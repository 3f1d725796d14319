use super::glyphs::GlyphSet;
use super::{escape_xml as esc, foreground_for, icon_label, Block, LayoutCondition, RenderError, STYLESHEET, TITLE};
use crate::hazard::{HazardIcon, IconSet};

/// Inline `<span>` holding an SVG glyph on the icon's scale color.
pub(super) fn icon_fragment(icon: &HazardIcon, glyphs: &GlyphSet, id: Option<&str>) -> Result<String, RenderError> {
    let glyph = glyphs.get(&icon.glyph_id)?;
    let label = icon_label(icon);
    let id_attr = id.map(|i| format!(" id=\"{}\"", esc(i))).unwrap_or_default();
    let mut s = format!(
        "<span{id_attr} class=\"icon icon-{}\" role=\"img\" aria-label=\"{}\">",
        icon.glyph_id,
        esc(&label)
    );
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{}\" aria-hidden=\"true\"><title>{}</title>",
        glyphs.view_box,
        esc(&label)
    ));
    s.push_str(&format!("<rect width=\"48\" height=\"48\" rx=\"6\" fill=\"{}\"/>", icon.color));
    s.push_str(&format!(
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"3\" stroke-linecap=\"round\" stroke-linejoin=\"round\">",
        foreground_for(&icon.color)
    ));
    for p in &glyph.paths {
        s.push_str(&format!("<path d=\"{p}\"/>"));
    }
    s.push_str("</g></svg>");
    s.push_str(&format!("<span class=\"icon-caption\">{}</span></span>", esc(&caption(icon))));
    Ok(s)
}

pub(super) fn caption(icon: &HazardIcon) -> String {
    match icon.gust {
        Some(g) => format!("{}, gusts F{}", icon.level_label, g.force),
        None => icon.level_label.clone(),
    }
}

fn icon_row(id: &str, source: &str, caption: &str, icons: &IconSet, glyphs: &GlyphSet) -> Result<String, RenderError> {
    let mut s = format!(
        "<div id=\"{}\" class=\"icon-row\" data-source=\"{}\" role=\"list\" aria-label=\"{}\">",
        esc(id),
        esc(source),
        esc(caption)
    );
    for (k, icon) in icons.iter().enumerate() {
        s.push_str(&icon_fragment(icon, glyphs, Some(&format!("{id}-{k}")))?);
    }
    s.push_str("</div>\n");
    Ok(s)
}

pub(super) fn write(blocks: &[Block], condition: LayoutCondition, glyphs: &GlyphSet) -> Result<String, RenderError> {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    out.push_str(&format!("<title>{TITLE}</title>\n<style>\n{STYLESHEET}</style>\n</head>\n<body>\n"));
    out.push_str(&format!("<main class=\"forecast\" data-condition=\"{condition}\">\n"));
    for block in blocks {
        match block {
            Block::Header { rows } => {
                out.push_str(&format!("<header>\n<h1>{TITLE}</h1>\n"));
                for r in rows {
                    out.push_str(&format!(
                        "<p id=\"{}\" data-source=\"{}\">{}</p>\n",
                        r.id,
                        esc(&r.source),
                        esc(&r.text)
                    ));
                }
                out.push_str("</header>\n");
            }
            Block::IconRow {
                id,
                source,
                caption,
                icons,
            } => out.push_str(&icon_row(id, source, caption, icons, glyphs)?),
            Block::Summary { id, text } => {
                out.push_str(&format!(
                    "<section id=\"{id}\" class=\"summary\" data-source=\"summary_text\">\n<h2>Summary</h2>\n<p>{}</p>\n</section>\n",
                    esc(text)
                ));
            }
            Block::Period {
                id,
                source,
                label,
                icons,
                rows,
            } => {
                out.push_str(&format!(
                    "<section id=\"{id}\" class=\"period\" data-source=\"{}\">\n<h2>{}</h2>\n",
                    esc(source),
                    esc(label)
                ));
                if let Some((icon_id, set)) = icons {
                    let src = format!("derived:{}", source.trim_end_matches(".label"));
                    out.push_str(&icon_row(icon_id, &src, &format!("Hazards, {label}"), set, glyphs)?);
                }
                for r in rows {
                    out.push_str(&format!(
                        "<p id=\"{}\" data-source=\"{}\">{}</p>\n",
                        r.id,
                        esc(&r.source),
                        esc(&r.text)
                    ));
                }
                out.push_str("</section>\n");
            }
        }
    }
    out.push_str("</main>\n</body>\n</html>\n");
    Ok(out)
}

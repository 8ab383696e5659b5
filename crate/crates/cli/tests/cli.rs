mod common;

use std::process::Command;

use common::*;
use mgcolor_core::elements::build_element_list;
use mgcolor_core::palette::{palette_for, DocBounds};
use mgcolor_core::recolor::{anchor_color, apply_group_shift, apply_set_rgb, group_auto, HslShift};
use mgcolor_core::{
    extract_occurrences, extract_theme, parse_document, report, serialize_document, PaletteConfig, ThemeConfig,
};
use serde_json::json;

fn path(name: &str) -> String {
    fixture_path(name).display().to_string()
}

#[test]
fn analyze_matches_library() {
    for name in fixture_names() {
        let (code, out, err) = cli(&["analyze", &path(&name)], "");
        assert_eq!(code, 0, "{name}: {err}");
        let set = extract_occurrences(&parse_document(&fixture_text(&name)).unwrap());
        assert_eq!(parse(&out), report::occurrences_json(&set).unwrap(), "{name}");
    }
}

#[test]
fn extract_theme_matches_library_and_is_deterministic() {
    for name in fixture_names() {
        let set = extract_occurrences(&parse_document(&fixture_text(&name)).unwrap());
        for (k, seed) in [(5, 42), (2, 7)] {
            let args = ["extract-theme", &path(&name), "--k", &k.to_string(), "--seed", &seed.to_string()];
            let (code, out, err) = cli(&args, "");
            let cfg = ThemeConfig { k, seed, ..ThemeConfig::default() };
            match extract_theme(&set, &cfg) {
                Ok(theme) => {
                    assert_eq!(code, 0, "{name}: {err}");
                    assert_eq!(parse(&out), report::theme_json(&theme, &cfg), "{name}");
                    assert_eq!(cli(&args, "").1, out, "byte-identical reruns");
                }
                Err(e) => {
                    assert_eq!(code, 2, "{name}");
                    assert_eq!(parse(&err)["error"], e.kind());
                }
            }
        }
    }
}

#[test]
fn palette_matches_library() {
    for name in fixture_names() {
        let text = fixture_text(&name);
        let doc = parse_document(&text).unwrap();
        let set = extract_occurrences(&doc);
        let (code, out, _) = cli(&["palette", &path(&name), "--step", "10", "--zoom", "25"], "");
        assert_eq!(code, 0);
        let cfg = PaletteConfig { step: Some(10.0), zoom: 25.0, ..PaletteConfig::default() };
        let palette = palette_for(&set, DocBounds::of(&doc), &cfg).unwrap();
        assert_eq!(parse(&out), report::palette_json(&palette), "{name}");

        let (code, svg, _) = cli(&["palette", &path(&name), "--step", "10", "--zoom", "25", "--format", "svg"], "");
        assert_eq!(code, 0);
        assert_eq!(svg, palette.to_svg(10.0));
    }
}

#[test]
fn list_elements_matches_library() {
    for name in fixture_names() {
        let doc = parse_document(&fixture_text(&name)).unwrap();
        let set = extract_occurrences(&doc);
        let (code, out, _) = cli(&["list-elements", &path(&name)], "");
        assert_eq!(code, 0);
        assert_eq!(parse(&out), report::elements_json(&build_element_list(&doc, &set)));
        // indented
        assert!(out.contains("\n  "));
    }
}

#[test]
fn reads_stdin() {
    let text = fixture_text("nested_groups.json");
    let (code, a, _) = cli(&["extract-theme"], &text);
    assert_eq!(code, 0);
    let (_, b, _) = cli(&["extract-theme", "-"], &text);
    let (_, c, _) = cli(&["extract-theme", &path("nested_groups.json")], "");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn recolor_match_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let text = fixture_text("shared_color.json");
    let doc = parse_document(&text).unwrap();
    let set = extract_occurrences(&doc);
    let (code, stdout, err) = cli(
        &["recolor", &path("shared_color.json"), "--match", "#085CA6", "--threshold", "20", "--hue", "40", "-o", out.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0, "{err}");
    let group = group_auto(&anchor_color(&set, &hex("#085ca6")), &set, 20.0).unwrap();
    let (expected, mapping) = apply_group_shift(&doc, &set, &group, &HslShift::hue(40.0)).unwrap();
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, serialize_document(&expected));
    let summary = parse(&stdout);
    assert_eq!(summary["mapping"], report::mapping_json(&mapping));
    assert_eq!(summary["group"], report::colors_json(group.members()));

    // colors outside the group are untouched
    let after = extract_occurrences(&parse_document(&written).unwrap());
    for (a, b) in set.occurrences.iter().zip(&after.occurrences) {
        if !group.contains(&a.color) {
            assert_eq!(a.color, b.color);
        }
    }
}

#[test]
fn recolor_shift_flags() {
    let text = fixture_text("nested_groups.json");
    let doc = parse_document(&text).unwrap();
    let set = extract_occurrences(&doc);
    let target = set.distinct_colors()[0];
    let group = group_auto(&anchor_color(&set, &target), &set, 15.0).unwrap();
    for (flag, shift) in [("--sat", HslShift::saturation(-0.25)), ("--light", HslShift::lightness(0.1))] {
        let delta = shift.delta.to_string();
        let (code, out, err) =
            cli(&["recolor", "--match", &target.to_hex(), "--threshold", "15", flag, &delta], &text);
        assert_eq!(code, 0, "{err}");
        let (expected, _) = apply_group_shift(&doc, &set, &group, &shift).unwrap();
        assert_eq!(out, serialize_document(&expected));
    }
}

#[test]
fn recolor_identity_and_set_rgb() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let text = fixture_text("shared_color.json");
    let (code, _, err) =
        cli(&["recolor", &path("shared_color.json"), "--from", "#ffffff", "--to", "#ffffff", "-o", out.to_str().unwrap()], "");
    assert_eq!(code, 0, "{err}");
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(mgcolor_core::json_diff::semantically_equal(&parse(&written), &parse(&text), 0.0));

    let doc = parse_document(&text).unwrap();
    let (code, stdout, _) = cli(&["recolor", "--from", "#085ca6", "--to", "#8c4265"], &text);
    assert_eq!(code, 0);
    assert_eq!(stdout, serialize_document(&apply_set_rgb(&doc, &hex("#085ca6"), &hex("#8c4265")).unwrap()));
}

#[test]
fn domain_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = out.to_str().unwrap();
    let colorless = dir.path().join("colorless.json");
    std::fs::write(&colorless, document(vec![], 30.0, 60.0).to_string()).unwrap();
    let c = colorless.to_str().unwrap();
    let cases: [(&[&str], &str); 3] = [
        (&["recolor", &path("static_fill.json"), "--match", "#00ff00", "--threshold", "5", "--hue", "10", "-o", o], "EmptyGroup"),
        (&["recolor", &path("static_fill.json"), "--from", "#123456", "--to", "#000000", "-o", o], "UnknownColor"),
        (&["extract-theme", c, "-o", o], "EmptyDocument"),
    ];
    for (args, kind) in cases {
        let (code, stdout, stderr) = cli(args, "");
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(stdout.is_empty());
        assert_eq!(stderr.trim().lines().count(), 1);
        let record = parse(stderr.trim());
        assert_eq!(record["error"], kind);
        assert_eq!(record["exit_code"], 2);
        assert!(!out.exists(), "{args:?} wrote output");
    }
}

#[test]
fn usage_and_io_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = out.to_str().unwrap();
    let missing = dir.path().join("missing.json");
    let m = missing.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["extract-theme", m, "-o", o],
        vec!["extract-theme", m, "--k", "0", "-o", o],
        vec!["palette", m, "--zoom", "101", "-o", o],
        vec!["palette", m, "--step", "-2", "-o", o],
        vec!["analyze", m, "--format", "svg", "-o", o],
        vec!["recolor", m, "--match", "#023e73", "-o", o],
        vec!["recolor", m, "--match", "#023e73", "--hue", "10", "--sat", "0.1", "-o", o],
        vec!["recolor", m, "--match", "nothex", "--hue", "10", "-o", o],
        vec!["recolor", m, "--from", "#000000", "-o", o],
        vec!["recolor", m, "--hue", "10", "-o", o],
        vec!["extract-theme", "--threshold", "-1", m],
    ];
    for args in cases {
        let (code, stdout, stderr) = cli(&args, "");
        assert_eq!(code, 1, "{args:?}: {stderr}");
        assert!(stdout.is_empty());
        let record = parse(stderr.trim());
        assert_eq!(record["exit_code"], 1);
        assert!(!out.exists());
    }
    // flag problems are reported before the missing file is noticed
    let (_, _, stderr) = cli(&["extract-theme", m, "--k", "0"], "");
    assert_eq!(parse(stderr.trim())["error"], "UsageError");
    let (_, _, stderr) = cli(&["extract-theme", m], "");
    assert_eq!(parse(stderr.trim())["error"], "IoError");
    let (code, _, stderr) = cli(&["analyze"], "{not json");
    assert_eq!(code, 1);
    assert_eq!(parse(stderr.trim())["error"], "MalformedJson");
}

#[test]
fn help_and_version() {
    let (code, out, _) = cli(&["--help"], "");
    assert_eq!(code, 0);
    for sub in ["analyze", "extract-theme", "palette", "list-elements", "recolor", "serve"] {
        assert!(out.contains(sub), "{sub}");
    }
    let (code, out, _) = cli(&["--version"], "");
    assert_eq!(code, 0);
    assert!(out.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn serve_rejects_missing_ui_dir() {
    let (code, _, stderr) = cli(&["serve", "--with-ui", "--ui-dir", "/nonexistent/ui", "--bind", "127.0.0.1:0"], "");
    assert_eq!(code, 1);
    assert_eq!(parse(stderr.trim())["error"], "UsageError");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mgcolor");
    let ok = Command::new(bin).args(["analyze", &path("static_fill.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());
    let domain = Command::new(bin)
        .args(["recolor", &path("static_fill.json"), "--from", "#123456", "--to", "#000000"])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(2));
    let record = parse(String::from_utf8_lossy(&domain.stderr).trim());
    assert_eq!(record, json!({"error": "UnknownColor", "message": record["message"], "exit_code": 2}));
    let usage = Command::new(bin).args(["palette", "--zoom", "x"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

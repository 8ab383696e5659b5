//! Request bodies and the persisted edit-log format.

use mgcolor_core::recolor::{
    group_by_hex, set_rgb_by_hex, ColorGroup, EditKind, HslChannel, HslShift, DEFAULT_RAMP,
};
use mgcolor_core::{ColorAddress, Error, OccurrenceSet, Rgba};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
pub struct AutoSelection {
    #[serde(alias = "theme")]
    pub theme_hex: Rgba,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct MemberEdit {
    #[serde(default)]
    pub add: Vec<Rgba>,
    #[serde(default)]
    pub remove: Vec<Rgba>,
}

/// `{"auto": {...}}`, `{"manual": [...]}`, `{"edit": {...}}` or
/// `{"clear": true}`; `"preview": true` answers without storing.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectBody {
    pub auto: Option<AutoSelection>,
    pub manual: Option<Vec<Rgba>>,
    pub edit: Option<MemberEdit>,
    #[serde(default)]
    pub clear: bool,
    #[serde(default)]
    pub preview: bool,
}

#[derive(Debug, Clone)]
pub enum SelectRequest {
    Auto { theme: Rgba, threshold: Option<f64> },
    Manual(Vec<Rgba>),
    Edit { add: Vec<Rgba>, remove: Vec<Rgba> },
    Clear,
}

impl SelectBody {
    pub fn request(self) -> Result<SelectRequest, Error> {
        let given = [self.auto.is_some(), self.manual.is_some(), self.edit.is_some(), self.clear];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(Error::InvalidParameter(
                "selection needs exactly one of auto, manual, edit, clear".into(),
            ));
        }
        Ok(if let Some(a) = self.auto {
            SelectRequest::Auto { theme: a.theme_hex, threshold: a.threshold }
        } else if let Some(m) = self.manual {
            SelectRequest::Manual(m)
        } else if let Some(e) = self.edit {
            SelectRequest::Edit { add: e.add, remove: e.remove }
        } else {
            SelectRequest::Clear
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetRgbRequest {
    /// Defaults to the single selected color.
    pub from: Option<Rgba>,
    pub to: Rgba,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupShiftRequest {
    pub channel: HslChannel,
    pub delta: f64,
    /// Defaults to the current selection.
    pub colors: Option<Vec<Rgba>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameIsolatedRequest {
    pub address: ColorAddress,
    pub frame: f64,
    pub color: Rgba,
    pub ramp: Option<f64>,
}

/// `{"kind": "set_rgb" | "group_shift" | "frame_isolated", ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EditRequest {
    SetRgb(SetRgbRequest),
    GroupShift(GroupShiftRequest),
    FrameIsolated(FrameIsolatedRequest),
}

#[derive(Debug, Clone, Deserialize)]
pub struct EditBody {
    #[serde(flatten)]
    pub request: EditRequest,
    #[serde(default)]
    pub preview: bool,
}

impl EditRequest {
    pub fn to_command(&self, set: &OccurrenceSet, selection: Option<&ColorGroup>) -> Result<EditKind, Error> {
        match self {
            EditRequest::SetRgb(r) => match &r.from {
                Some(from) => set_rgb_by_hex(set, from, r.to),
                None => EditKind::set_rgb_for_group(selection.ok_or(Error::EmptyGroup)?, r.to),
            },
            EditRequest::GroupShift(r) => {
                let group = match &r.colors {
                    Some(colors) => group_by_hex(set, colors)?,
                    None => selection.cloned().ok_or(Error::EmptyGroup)?,
                };
                group.validate(set)?;
                Ok(EditKind::GroupShift { group, shift: HslShift { channel: r.channel, delta: r.delta } })
            }
            EditRequest::FrameIsolated(r) => {
                Ok(EditKind::FrameIsolated {
                    address: r.address.clone(),
                    frame: r.frame,
                    color: r.color,
                    ramp: r.ramp.unwrap_or(DEFAULT_RAMP),
                })
            }
        }
    }
}

type Channels = [f64; 4];

fn channels(c: &Rgba) -> Channels {
    [c.r, c.g, c.b, c.a]
}

fn color(c: &Channels) -> Rgba {
    Rgba::new(c[0], c[1], c[2], c[3])
}

/// An applied edit with exact channel values, as written to `log.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LogEntry {
    Edit { command: LoggedCommand },
    Undo,
    Redo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoggedCommand {
    SetRgb { from: Channels, to: Channels },
    Remap { mapping: Vec<(Channels, Channels)> },
    GroupShift { members: Vec<Channels>, channel: HslChannel, delta: f64 },
    FrameIsolated { address: ColorAddress, frame: f64, color: Channels, ramp: f64 },
}

impl LoggedCommand {
    pub fn from_kind(kind: &EditKind) -> Self {
        match kind {
            EditKind::SetRgb { from, to } => LoggedCommand::SetRgb { from: channels(from), to: channels(to) },
            EditKind::Remap { mapping } => {
                LoggedCommand::Remap { mapping: mapping.iter().map(|(a, b)| (channels(a), channels(b))).collect() }
            }
            EditKind::GroupShift { group, shift } => LoggedCommand::GroupShift {
                members: group.members().iter().map(channels).collect(),
                channel: shift.channel,
                delta: shift.delta,
            },
            EditKind::FrameIsolated { address, frame, color, ramp } => LoggedCommand::FrameIsolated {
                address: address.clone(),
                frame: *frame,
                color: channels(color),
                ramp: *ramp,
            },
        }
    }

    pub fn to_kind(&self, set: &OccurrenceSet) -> Result<EditKind, Error> {
        Ok(match self {
            LoggedCommand::SetRgb { from, to } => EditKind::SetRgb { from: color(from), to: color(to) },
            LoggedCommand::Remap { mapping } => {
                EditKind::Remap { mapping: mapping.iter().map(|(a, b)| (color(a), color(b))).collect() }
            }
            LoggedCommand::GroupShift { members, channel, delta } => {
                let members: Vec<Rgba> = members.iter().map(color).collect();
                EditKind::GroupShift {
                    group: ColorGroup::manual(&members, set)?,
                    shift: HslShift { channel: *channel, delta: *delta },
                }
            }
            LoggedCommand::FrameIsolated { address, frame, color: c, ramp } => EditKind::FrameIsolated {
                address: address.clone(),
                frame: *frame,
                color: color(c),
                ramp: *ramp,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn select_body_needs_one_form() {
        let body: SelectBody = serde_json::from_value(json!({"manual": ["#ff0000"]})).unwrap();
        assert!(matches!(body.request(), Ok(SelectRequest::Manual(_))));
        let body: SelectBody = serde_json::from_value(json!({"clear": true})).unwrap();
        assert!(matches!(body.request(), Ok(SelectRequest::Clear)));
        let body: SelectBody = serde_json::from_value(json!({})).unwrap();
        assert!(body.request().is_err());
        assert!(serde_json::from_value::<SelectBody>(json!({"bogus": 1})).is_err());
    }

    #[test]
    fn edit_body_is_tagged_by_kind() {
        let body: EditBody =
            serde_json::from_value(json!({"kind": "group_shift", "channel": "hue", "delta": 12.5, "preview": true}))
                .unwrap();
        assert!(body.preview);
        match body.request {
            EditRequest::GroupShift(r) => {
                assert_eq!(r.channel, HslChannel::Hue);
                assert_eq!(r.delta, 12.5);
                assert!(r.colors.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn logged_commands_keep_exact_channels() {
        let from = Rgba::new(0.123456789, 0.5, 0.25, 1.0);
        let to = Rgba::new(1.0 / 3.0, 0.1, 0.2, 0.9);
        let kind = EditKind::SetRgb { from, to };
        let logged = LoggedCommand::from_kind(&kind);
        let line = serde_json::to_string(&LogEntry::Edit { command: logged.clone() }).unwrap();
        let back: LogEntry = serde_json::from_str(&line).unwrap();
        assert_eq!(back, LogEntry::Edit { command: logged });
        match back {
            LogEntry::Edit { command: LoggedCommand::SetRgb { from: f, to: t } } => {
                assert_eq!(f, [from.r, from.g, from.b, from.a]);
                assert_eq!(t, [to.r, to.g, to.b, to.a]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(serde_json::to_string(&LogEntry::Undo).unwrap(), r#"{"op":"undo"}"#);
    }
}

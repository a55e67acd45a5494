#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "archmark/landmarks.hpp"
#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"
#include "archmark/tooth_types.hpp"

namespace archmark {

enum class SyntheticShape { incisor, canine, premolar, molar };

struct SyntheticTooth {
    std::string code;                 ///< whole code, e.g. "UR6"
    SyntheticShape shape = SyntheticShape::incisor;
    double mesiodistal = 8.0;         ///< mm along the arch
    double buccolingual = 7.0;        ///< mm across the arch
    double lingual_drop = 0.8;        ///< premolar/molar lingual cusps sit this much lower
    bool present = true;              ///< a missing tooth keeps its space
    bool split = false;               ///< molar as two separate halves
    bool partial = false;             ///< molar with only the mesial half erupted
    double crowding_offset = 0.0;     ///< buccal displacement (mm)
};

struct CheekFragment {
    double arc_position = 20.0; ///< signed arc length of the centre (mm)
    double radius = 3.0;
    double height_below_top = 2.5;
    double inset = 1.0; ///< centre distance inside the band edge
};

/**
 * Horseshoe gum band around y = apex_y - k x^2 with teeth standing on it.
 * Lengths in mm; the generated frame is the identity with up = +z.
 */
struct SyntheticSpec {
    JawKind kind;
    std::vector<SyntheticTooth> teeth; ///< one quadrant-pair, any order
    double arch_k = 0.045;
    double apex_y = 25.0;
    double grid_spacing = 0.2;
    double band_half_width = 9.5;
    double end_margin = 3.0;
    double gap = 0.6;
    double tooth_top = 10.0;
    double gum_crest = 2.5;
    double gum_falloff = 0.05;
    double size_jitter = 0.0;   ///< relative s.d. of per-tooth size noise
    double height_jitter = 0.0; ///< s.d. (mm) of per-tooth top height noise
    double shape_jitter = 0.0;  ///< relative s.d. of crown wall steepness
    std::optional<CheekFragment> cheek;
    std::uint64_t seed = 1;
};

/// Default full dentition for a jaw kind (third molars excluded for adults).
SyntheticSpec default_synthetic_spec(JawKind kind, bool with_third_molars = false);

SyntheticTooth* find_tooth(SyntheticSpec& spec, const std::string& code);

struct GroundTruthLandmark {
    LandmarkKind kind;
    Vec3 position;
};

struct GroundTruthTooth {
    std::string code;                  ///< whole code
    std::vector<FaceIndex> faces;      ///< sorted
    std::vector<FaceIndex> mesial_faces;
    std::vector<FaceIndex> distal_faces;
    bool split = false;
    bool partial = false;
    std::vector<GroundTruthLandmark> landmarks;
};

struct SyntheticJaw {
    IndexedMesh mesh;
    Frame frame;
    std::vector<GroundTruthTooth> teeth; ///< left to right along +x
    std::vector<FaceIndex> cheek_faces;
};

/// Deterministic for a fixed spec (including seed). Throws
/// Error(invalid_input) when tooth footprints overlap or the spec is empty.
SyntheticJaw generate_synthetic_jaw(const SyntheticSpec& spec);

std::string to_json(const SyntheticSpec& spec);
SyntheticSpec parse_synthetic_spec(const std::string& json_text);

/**
 * Label of a face set against ground truth: the tooth holding most of it,
 * refined to a half code when the tooth is split or partial and at least
 * min_half_fraction lies in one half. nullopt when no tooth holds at least
 * min_fraction of the faces.
 */
std::optional<std::string> ground_truth_label(const SyntheticJaw& jaw, JawKind kind,
                                              const std::vector<FaceIndex>& faces, double min_fraction = 0.5,
                                              double min_half_fraction = 0.7);

} // namespace archmark

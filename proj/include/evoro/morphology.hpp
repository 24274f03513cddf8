#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoro/cppn.hpp"

namespace evoro {

enum class ModuleType { Core, Brick, ActiveHinge };
enum class Face { Front, Back, Left, Right, Up, Down };

std::string module_type_name(ModuleType t);
ModuleType module_type_from_name(const std::string& name);
std::string face_name(Face f);
Face face_from_name(const std::string& name);

using GridPos = std::array<int, 3>;

struct Module {
    GridPos pos{0, 0, 0};
    ModuleType type = ModuleType::Core;
    int rotation = 0;         // degrees about the module's forward axis, 0 or 90
    int parent = -1;          // index into Morphology::modules, -1 for the core
    Face face = Face::Front;  // parent face this module is attached to
};

// Tree of at most ten modules on an integer grid, core first at the origin.
struct Morphology {
    std::vector<Module> modules;

    void validate() const;  // throws std::invalid_argument on a broken invariant

    nlohmann::json to_json() const;
    static Morphology from_json(const nlohmann::json& j);

    // Top-down debug view of the (x, y) footprint: C/B/H per cell, lowercase
    // when the shown module sits off the ground plane.
    std::string ascii_render() const;
};

struct MorphDescriptors {
    int absolute_size = 0;
    double proportion = 0.0;
    int num_bricks = 0;
    double rel_limbs = 0.0;
    double symmetry = 0.0;
    double branching = 0.0;
};

inline constexpr int kMaxModules = 10;

// Grows a body from the genome by breadth-first socket exploration. Each open
// socket queries the genome at the candidate cell with inputs
// (x, y, z, tree distance to core); the first three outputs vote
// brick/joint/empty and the last two vote rotation 0/90. Occupied cells are
// skipped, growth halts at kMaxModules. Deterministic and total.
Morphology decode_body(const CppnGenome& genome);

MorphDescriptors compute_descriptors(const Morphology& m);

}  // namespace evoro

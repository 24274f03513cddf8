#include "evoro/morphology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace evoro {

std::string module_type_name(ModuleType t) {
    switch (t) {
        case ModuleType::Core:        return "core";
        case ModuleType::Brick:       return "brick";
        case ModuleType::ActiveHinge: return "active_hinge";
    }
    throw std::logic_error("unknown module type");
}

ModuleType module_type_from_name(const std::string& name) {
    if (name == "core") return ModuleType::Core;
    if (name == "brick") return ModuleType::Brick;
    if (name == "active_hinge") return ModuleType::ActiveHinge;
    throw std::invalid_argument("unknown module type: " + name);
}

std::string face_name(Face f) {
    switch (f) {
        case Face::Front: return "front";
        case Face::Back:  return "back";
        case Face::Left:  return "left";
        case Face::Right: return "right";
        case Face::Up:    return "up";
        case Face::Down:  return "down";
    }
    throw std::logic_error("unknown face");
}

Face face_from_name(const std::string& name) {
    if (name == "front") return Face::Front;
    if (name == "back") return Face::Back;
    if (name == "left") return Face::Left;
    if (name == "right") return Face::Right;
    if (name == "up") return Face::Up;
    if (name == "down") return Face::Down;
    throw std::invalid_argument("unknown face: " + name);
}

namespace {

GridPos add(const GridPos& a, const GridPos& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

GridPos negate(const GridPos& a) { return {-a[0], -a[1], -a[2]}; }

// f x u for axis-aligned unit vectors.
GridPos cross(const GridPos& f, const GridPos& u) {
    return {f[1] * u[2] - f[2] * u[1],
            f[2] * u[0] - f[0] * u[2],
            f[0] * u[1] - f[1] * u[0]};
}

// Orientation of a placed module: forward points away from its parent
// (the core faces +y by convention), up completes the frame.
struct Frame {
    GridPos forward{0, 1, 0};
    GridPos up{0, 0, 1};
};

GridPos face_direction(const Frame& fr, Face f) {
    GridPos right = cross(fr.forward, fr.up);
    switch (f) {
        case Face::Front: return fr.forward;
        case Face::Back:  return negate(fr.forward);
        case Face::Left:  return negate(right);
        case Face::Right: return right;
        case Face::Up:    return fr.up;
        case Face::Down:  return negate(fr.up);
    }
    throw std::logic_error("unknown face");
}

// Open sockets per module kind, in the fixed exploration order. The core
// offers its four lateral faces; a brick offers the three faces its parent
// does not occupy, swapped to the vertical pair when rotated; a hinge only
// continues forward.
std::vector<Face> socket_faces(ModuleType type, int rotation) {
    switch (type) {
        case ModuleType::Core:
            return {Face::Front, Face::Back, Face::Left, Face::Right};
        case ModuleType::Brick:
            if (rotation == 90) return {Face::Front, Face::Up, Face::Down};
            return {Face::Front, Face::Left, Face::Right};
        case ModuleType::ActiveHinge:
            return {Face::Front};
    }
    throw std::logic_error("unknown module type");
}

// Child frame for a module attached in direction `dir`: forward points along
// the attachment; up is kept horizontal, falling back to the parent's forward
// axis when the child grows vertically.
Frame child_frame(const Frame& parent, const GridPos& dir) {
    Frame fr;
    fr.forward = dir;
    fr.up = (dir[2] == 0) ? parent.up : parent.forward;
    return fr;
}

std::size_t argmax(const double* v, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

Morphology decode_body(const CppnGenome& genome) {
    if (genome.input_count != 4 || genome.output_count != 5)
        throw std::invalid_argument("body genome must have 4 inputs and 5 outputs");

    Morphology body;
    body.modules.push_back(Module{});  // core at the origin

    std::map<GridPos, bool> occupied;
    occupied[{0, 0, 0}] = true;

    std::vector<Frame> frames{Frame{}};
    std::vector<int> depth{0};

    std::deque<int> queue{0};
    while (!queue.empty() && body.modules.size() < kMaxModules) {
        int parent = queue.front();
        queue.pop_front();
        // Copies, not references: the push_backs below may reallocate.
        const Module pm = body.modules[static_cast<std::size_t>(parent)];
        const Frame pf = frames[static_cast<std::size_t>(parent)];

        for (Face f : socket_faces(pm.type, pm.rotation)) {
            if (body.modules.size() >= kMaxModules) break;
            GridPos dir = face_direction(pf, f);
            GridPos cell = add(pm.pos, dir);
            if (occupied.count(cell)) continue;

            std::vector<double> out = cppn_eval(
                genome, {static_cast<double>(cell[0]), static_cast<double>(cell[1]),
                         static_cast<double>(cell[2]),
                         static_cast<double>(depth[static_cast<std::size_t>(parent)] + 1)});
            std::size_t kind = argmax(out.data(), 3);
            if (kind == 2) continue;  // empty space wins

            Module child;
            child.pos = cell;
            child.type = (kind == 0) ? ModuleType::Brick : ModuleType::ActiveHinge;
            child.rotation = (argmax(out.data() + 3, 2) == 0) ? 0 : 90;
            child.parent = parent;
            child.face = f;

            occupied[cell] = true;
            body.modules.push_back(child);
            frames.push_back(child_frame(pf, dir));
            depth.push_back(depth[static_cast<std::size_t>(parent)] + 1);
            queue.push_back(static_cast<int>(body.modules.size()) - 1);
        }
    }
    return body;
}

void Morphology::validate() const {
    if (modules.empty()) throw std::invalid_argument("empty morphology");
    if (modules.size() > kMaxModules)
        throw std::invalid_argument("more than " + std::to_string(kMaxModules) + " modules");
    if (modules[0].type != ModuleType::Core || modules[0].parent != -1)
        throw std::invalid_argument("first module must be a parentless core");
    std::set<GridPos> cells;
    for (std::size_t i = 0; i < modules.size(); ++i) {
        const Module& m = modules[i];
        if (!cells.insert(m.pos).second)
            throw std::invalid_argument("two modules share a grid cell");
        if (i == 0) continue;
        if (m.type == ModuleType::Core)
            throw std::invalid_argument("more than one core");
        if (m.parent < 0 || m.parent >= static_cast<int>(i))
            throw std::invalid_argument("module parent must precede it");
        const GridPos& p = modules[static_cast<std::size_t>(m.parent)].pos;
        int dist = std::abs(m.pos[0] - p[0]) + std::abs(m.pos[1] - p[1]) +
                   std::abs(m.pos[2] - p[2]);
        if (dist != 1)
            throw std::invalid_argument("module not adjacent to its parent");
        if (m.rotation != 0 && m.rotation != 90)
            throw std::invalid_argument("rotation must be 0 or 90");
    }
}

// ---------------------------------------------------------------------------
// Descriptors

namespace {

// Attachment counts per module: total neighbors in the tree, and the subset
// lying in the same horizontal plane (used by the branching descriptor).
struct Attachments {
    std::vector<int> total;
    std::vector<int> lateral;
};

Attachments count_attachments(const Morphology& body) {
    Attachments a;
    a.total.assign(body.modules.size(), 0);
    a.lateral.assign(body.modules.size(), 0);
    for (std::size_t i = 1; i < body.modules.size(); ++i) {
        const Module& m = body.modules[i];
        std::size_t p = static_cast<std::size_t>(m.parent);
        ++a.total[i];
        ++a.total[p];
        if (m.pos[2] == body.modules[p].pos[2]) {
            ++a.lateral[i];
            ++a.lateral[p];
        }
    }
    return a;
}

// Mirror-match score across one horizontal axis: of the modules off the
// mirror plane, the fraction whose reflected cell holds a module of the same
// type. Positions are core-relative. axis = 0 reflects x, 1 reflects y.
double mirror_score(const std::vector<std::pair<GridPos, ModuleType>>& mods, int axis) {
    std::map<GridPos, ModuleType> by_pos;
    for (const auto& [pos, type] : mods) by_pos[pos] = type;
    int off_axis = 0;
    int matched = 0;
    for (const auto& [pos, type] : mods) {
        if (pos[static_cast<std::size_t>(axis)] == 0) continue;
        ++off_axis;
        GridPos mirror = pos;
        mirror[static_cast<std::size_t>(axis)] = -mirror[static_cast<std::size_t>(axis)];
        auto it = by_pos.find(mirror);
        if (it != by_pos.end() && it->second == type) ++matched;
    }
    if (off_axis == 0) return 1.0;
    return static_cast<double>(matched) / static_cast<double>(off_axis);
}

}  // namespace

MorphDescriptors compute_descriptors(const Morphology& body) {
    MorphDescriptors d;
    int m = static_cast<int>(body.modules.size());
    d.absolute_size = m;

    // Work in core-relative coordinates so translated copies score the same.
    GridPos origin = body.modules[0].pos;
    std::vector<std::pair<GridPos, ModuleType>> mods;
    mods.reserve(body.modules.size());
    for (const Module& mod : body.modules)
        mods.push_back({add(mod.pos, negate(origin)), mod.type});

    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const auto& [pos, type] : mods) {
        min_x = std::min(min_x, pos[0]);
        max_x = std::max(max_x, pos[0]);
        min_y = std::min(min_y, pos[1]);
        max_y = std::max(max_y, pos[1]);
        if (type == ModuleType::Brick) ++d.num_bricks;
    }
    int span_x = max_x - min_x + 1;
    int span_y = max_y - min_y + 1;
    d.proportion = static_cast<double>(std::min(span_x, span_y)) /
                   static_cast<double>(std::max(span_x, span_y));

    Attachments att = count_attachments(body);

    // Limbs: non-core modules touching the tree through a single face.
    int limbs = 0;
    for (std::size_t i = 1; i < body.modules.size(); ++i)
        if (att.total[i] == 1) ++limbs;
    int l_max = (m >= 6) ? 2 * ((m - 6) / 3) + (m - 6) % 3 + 4 : m - 1;
    d.rel_limbs = (l_max > 0) ? static_cast<double>(limbs) / l_max : 0.0;

    // Branching: modules occupied on all four lateral sides, against the
    // maximum a tree of this size could host.
    int branches = 0;
    for (std::size_t i = 0; i < body.modules.size(); ++i)
        if (att.lateral[i] == 4) ++branches;
    int b_max = std::max(0, (m - 2) / 3);
    d.branching = (b_max > 0) ? static_cast<double>(branches) / b_max : 0.0;

    d.symmetry = std::max(mirror_score(mods, 0), mirror_score(mods, 1));
    return d;
}

// ---------------------------------------------------------------------------
// Export

nlohmann::json Morphology::to_json() const {
    nlohmann::json mods = nlohmann::json::array();
    for (const Module& m : modules)
        mods.push_back({{"pos", {m.pos[0], m.pos[1], m.pos[2]}},
                        {"type", module_type_name(m.type)},
                        {"rotation", m.rotation},
                        {"parent", m.parent},
                        {"face", face_name(m.face)}});
    return {{"modules", mods}};
}

Morphology Morphology::from_json(const nlohmann::json& j) {
    Morphology body;
    for (const auto& e : j.at("modules")) {
        Module m;
        m.pos = {e.at("pos").at(0).get<int>(), e.at("pos").at(1).get<int>(),
                 e.at("pos").at(2).get<int>()};
        m.type = module_type_from_name(e.at("type").get<std::string>());
        m.rotation = e.at("rotation").get<int>();
        m.parent = e.at("parent").get<int>();
        m.face = face_from_name(e.at("face").get<std::string>());
        body.modules.push_back(m);
    }
    body.validate();
    return body;
}

std::string Morphology::ascii_render() const {
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const Module& m : modules) {
        min_x = std::min(min_x, m.pos[0]);
        max_x = std::max(max_x, m.pos[0]);
        min_y = std::min(min_y, m.pos[1]);
        max_y = std::max(max_y, m.pos[1]);
    }
    // Per (x, y) cell show the module nearest the ground plane.
    std::map<std::pair<int, int>, const Module*> shown;
    for (const Module& m : modules) {
        auto key = std::make_pair(m.pos[0], m.pos[1]);
        auto it = shown.find(key);
        if (it == shown.end() || std::abs(m.pos[2]) < std::abs(it->second->pos[2]))
            shown[key] = &m;
    }
    std::string out;
    for (int y = max_y; y >= min_y; --y) {
        for (int x = min_x; x <= max_x; ++x) {
            auto it = shown.find({x, y});
            if (it == shown.end()) {
                out += '.';
                continue;
            }
            char c = 'B';
            if (it->second->type == ModuleType::Core) c = 'C';
            if (it->second->type == ModuleType::ActiveHinge) c = 'H';
            if (it->second->pos[2] != 0) c = static_cast<char>(c - 'A' + 'a');
            out += c;
        }
        out += '\n';
    }
    return out;
}

}  // namespace evoro

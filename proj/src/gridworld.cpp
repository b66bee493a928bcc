#include "cfnav/gridworld.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

namespace cfnav {

namespace {

constexpr double kPi = std::numbers::pi;

int64_t sq(int64_t v) { return v * v; }

// vocabulary letter for class index
char class_letter(int cls) { return static_cast<char>('A' + cls); }

}  // namespace

// ------------------------------------------------------------------ GridScene

std::vector<std::pair<int, int>> GridScene::free_cells() const {
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (at(x, y).kind == CellKind::Free) out.emplace_back(x, y);
    return out;
}

std::vector<std::pair<int, int>> GridScene::target_cells(int cls) const {
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const Cell& c = at(x, y);
            if (c.kind == CellKind::Target && c.cls == cls) out.emplace_back(x, y);
        }
    return out;
}

const char* action_name(Action a) {
    switch (a) {
        case Action::MoveAhead: return "MoveAhead";
        case Action::RotateLeft: return "RotateLeft";
        case Action::RotateRight: return "RotateRight";
        case Action::LookUp: return "LookUp";
        case Action::LookDown: return "LookDown";
        case Action::Done: return "Done";
    }
    return "?";
}

// --------------------------------------------------------------- observation

int Observation::ray_hit_slot(int i) const {
    const int stride = ray_stride();
    const float* base = &rays[static_cast<size_t>(i) * stride + 1];
    for (int k = 0; k < stride - 1; ++k)
        if (base[k] > 0.5f) return k;
    return -1;
}

std::vector<float> Observation::image_vec() const {
    std::vector<float> out;
    append_image_to(out);
    return out;
}

void Observation::append_image_to(std::vector<float>& out) const {
    out.insert(out.end(), rays.begin(), rays.end());
    out.insert(out.end(), pitch_onehot.begin(), pitch_onehot.end());
}

// ---------------------------------------------------------------------- step

namespace {

void validate_pose(const GridScene& scene, const AgentPose& pose) {
    const bool heading_ok = pose.heading >= 0 && pose.heading < 360 && pose.heading % 45 == 0;
    const bool pitch_ok = pose.pitch == -30 || pose.pitch == 0 || pose.pitch == 30;
    if (!scene.is_free(pose.x, pose.y) || !heading_ok || !pitch_ok)
        throw std::invalid_argument("invalid agent pose for scene " + scene.id);
}

}  // namespace

StepOutcome step(const GridScene& scene, const AgentPose& pose, Action action) {
    validate_pose(scene, pose);
    StepOutcome out;
    out.new_pose = pose;
    switch (action) {
        case Action::MoveAhead: {
            const auto [dx, dy] = kHeadingDir[pose.heading / 45];
            const int nx = pose.x + dx, ny = pose.y + dy;
            if (scene.is_free(nx, ny)) {
                out.new_pose.x = nx;
                out.new_pose.y = ny;
            } else {
                out.collided = true;
            }
            break;
        }
        case Action::RotateLeft:
            out.new_pose.heading = (pose.heading + 45) % 360;
            break;
        case Action::RotateRight:
            out.new_pose.heading = (pose.heading + 315) % 360;
            break;
        case Action::LookUp:
            if (pose.pitch >= 30) out.action_failed = true;
            else out.new_pose.pitch = pose.pitch + 30;
            break;
        case Action::LookDown:
            if (pose.pitch <= -30) out.action_failed = true;
            else out.new_pose.pitch = pose.pitch - 30;
            break;
        case Action::Done:
            break;
    }
    return out;
}

// ---------------------------------------------------------------- visibility

std::vector<std::pair<int, int>> supercover_line(int x0, int y0, int x1, int y1) {
    std::vector<std::pair<int, int>> pts;
    int x = x0, y = y0;
    pts.emplace_back(x, y);
    int dx = x1 - x0, dy = y1 - y0;
    const int xstep = dx < 0 ? -1 : 1;
    const int ystep = dy < 0 ? -1 : 1;
    dx = std::abs(dx);
    dy = std::abs(dy);
    const int ddx = 2 * dx, ddy = 2 * dy;
    if (ddx >= ddy) {
        int errorprev = dx, error = dx;
        for (int i = 0; i < dx; ++i) {
            x += xstep;
            error += ddy;
            if (error > ddx) {
                y += ystep;
                error -= ddx;
                if (error + errorprev < ddx) pts.emplace_back(x, y - ystep);
                else if (error + errorprev > ddx) pts.emplace_back(x - xstep, y);
                else {  // passes exactly through a corner
                    pts.emplace_back(x, y - ystep);
                    pts.emplace_back(x - xstep, y);
                }
            }
            pts.emplace_back(x, y);
            errorprev = error;
        }
    } else {
        int errorprev = dy, error = dy;
        for (int i = 0; i < dy; ++i) {
            y += ystep;
            error += ddx;
            if (error > ddy) {
                x += xstep;
                error -= ddy;
                if (error + errorprev < ddy) pts.emplace_back(x - xstep, y);
                else if (error + errorprev > ddy) pts.emplace_back(x, y - ystep);
                else {
                    pts.emplace_back(x - xstep, y);
                    pts.emplace_back(x, y - ystep);
                }
            }
            pts.emplace_back(x, y);
            errorprev = error;
        }
    }
    return pts;
}

namespace {

// Obstacles between the endpoints block sight; Free and Target cells do not.
bool sight_clear(const GridScene& scene, int ax, int ay, int tx, int ty) {
    for (const auto& [cx, cy] : supercover_line(ax, ay, tx, ty)) {
        if ((cx == ax && cy == ay) || (cx == tx && cy == ty)) continue;
        if (scene.at(cx, cy).kind == CellKind::Obstacle) return false;
    }
    return true;
}

bool within_visibility_range(const GridScene& scene, int ax, int ay, int tx, int ty) {
    const double d2 = static_cast<double>(sq(tx - ax) + sq(ty - ay)) *
                      scene.cell_size * scene.cell_size;
    return d2 <= kVisibilityRange * kVisibilityRange;
}

// Exact integer sector test: direction (dx,dy) lies within +-45 degrees of the
// heading, boundaries inclusive. The FOV edges at heading+-45 are themselves
// 45-degree lattice directions, so two cross products decide it.
bool within_fov(int heading, int dx, int dy) {
    const int h = heading / 45;
    const auto [e1x, e1y] = kHeadingDir[(h + 7) % 8];
    const auto [e2x, e2y] = kHeadingDir[(h + 1) % 8];
    const int64_t c1 = static_cast<int64_t>(e1x) * dy - static_cast<int64_t>(e1y) * dx;
    const int64_t c2 = static_cast<int64_t>(dx) * e2y - static_cast<int64_t>(dy) * e2x;
    return c1 >= 0 && c2 >= 0;
}

void validate_goal(const GridScene& scene, int goal) {
    if (goal < 0 || goal >= scene.num_classes())
        throw UnknownGoalError("unknown goal class " + std::to_string(goal) +
                               " in scene " + scene.id);
}

}  // namespace

bool is_visible(const GridScene& scene, const AgentPose& pose, int goal) {
    validate_goal(scene, goal);
    for (const auto& [tx, ty] : scene.target_cells(goal)) {
        if (!within_visibility_range(scene, pose.x, pose.y, tx, ty)) continue;
        if (!within_fov(pose.heading, tx - pose.x, ty - pose.y)) continue;
        if (sight_clear(scene, pose.x, pose.y, tx, ty)) return true;
    }
    return false;
}

bool visible_any_heading(const GridScene& scene, int x, int y, int goal) {
    validate_goal(scene, goal);
    for (const auto& [tx, ty] : scene.target_cells(goal)) {
        if (tx == x && ty == y) continue;
        if (!within_visibility_range(scene, x, y, tx, ty)) continue;
        if (sight_clear(scene, x, y, tx, ty)) return true;
    }
    return false;
}

// ------------------------------------------------------------- shortest path

bool GridDist::less(const GridDist& a, const GridDist& b) {
    if (b.unreachable()) return !a.unreachable();
    if (a.unreachable()) return false;
    const int64_t da = a.straight - b.straight;
    const int64_t db = a.diag - b.diag;
    if (db == 0) return da < 0;
    if (db > 0) return da < 0 && sq(da) > 2 * sq(db);
    if (da <= 0) return true;
    return sq(da) < 2 * sq(db);
}

std::vector<GridDist> distance_field(const GridScene& scene, int goal) {
    validate_goal(scene, goal);
    const int w = scene.width, h = scene.height;
    std::vector<GridDist> dist(static_cast<size_t>(w) * h);

    struct Node {
        GridDist d;
        int x, y;
    };
    auto cmp = [](const Node& a, const Node& b) { return GridDist::less(b.d, a.d); };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> pq(cmp);

    for (const auto& [x, y] : scene.free_cells()) {
        if (visible_any_heading(scene, x, y, goal)) {
            dist[static_cast<size_t>(y) * w + x] = GridDist{0, 0};
            pq.push({GridDist{0, 0}, x, y});
        }
    }
    while (!pq.empty()) {
        const Node n = pq.top();
        pq.pop();
        GridDist& cur = dist[static_cast<size_t>(n.y) * w + n.x];
        if (GridDist::less(cur, n.d)) continue;  // stale entry
        for (const auto& [dx, dy] : kHeadingDir) {
            const int nx = n.x + dx, ny = n.y + dy;
            if (!scene.is_free(nx, ny)) continue;
            GridDist cand = n.d;
            if (dx != 0 && dy != 0) cand.diag += 1;
            else cand.straight += 1;
            GridDist& slot = dist[static_cast<size_t>(ny) * w + nx];
            if (slot.unreachable() || GridDist::less(cand, slot)) {
                slot = cand;
                pq.push({cand, nx, ny});
            }
        }
    }
    return dist;
}

double shortest_path_length(const GridScene& scene, const AgentPose& start, int goal) {
    validate_pose(scene, start);
    const auto field = distance_field(scene, goal);
    const GridDist d = field[static_cast<size_t>(start.y) * scene.width + start.x];
    if (d.unreachable())
        throw UnreachableTargetError("unreachable target: class " + std::to_string(goal) +
                                     " from (" + std::to_string(start.x) + "," +
                                     std::to_string(start.y) + ") in scene " + scene.id);
    return d.meters(scene.cell_size);
}

// ------------------------------------------------------------------- observe

Observation observe(const GridScene& scene, const AgentPose& pose, Action last_action,
                    int goal, Rng& noise_rng, double noise_sigma) {
    validate_pose(scene, pose);
    validate_goal(scene, goal);

    const int C = scene.num_classes();
    Observation obs;
    obs.num_rays = kNumRays;
    obs.num_classes = C;
    obs.rays.assign(static_cast<size_t>(kNumRays) * obs.ray_stride(), 0.0f);
    obs.goal_onehot.assign(C, 0.0f);
    obs.goal_onehot[goal] = 1.0f;
    obs.pitch_onehot[pose.pitch / 30 + 1] = 1.0f;
    obs.last_action_onehot[static_cast<int>(last_action)] = 1.0f;

    const double heading_rad = pose.heading * kPi / 180.0;
    const double range_cells = kRayMaxRange / scene.cell_size;
    const int stride = obs.ray_stride();

    for (int r = 0; r < kNumRays; ++r) {
        const double ang = heading_rad +
            (-kFovHalfDeg + 2.0 * kFovHalfDeg * r / (kNumRays - 1)) * kPi / 180.0;
        const double dirx = std::cos(ang), diry = std::sin(ang);
        const double px = pose.x + 0.5, py = pose.y + 0.5;
        const int stepx = dirx > 0 ? 1 : (dirx < 0 ? -1 : 0);
        const int stepy = diry > 0 ? 1 : (diry < 0 ? -1 : 0);
        const double inf = std::numeric_limits<double>::infinity();
        double t_max_x = stepx != 0
            ? ((stepx > 0 ? pose.x + 1 : pose.x) - px) / dirx : inf;
        double t_max_y = stepy != 0
            ? ((stepy > 0 ? pose.y + 1 : pose.y) - py) / diry : inf;
        const double t_dx = stepx != 0 ? 1.0 / std::abs(dirx) : inf;
        const double t_dy = stepy != 0 ? 1.0 / std::abs(diry) : inf;

        int cx = pose.x, cy = pose.y;
        double dist_norm = 1.0;
        int slot = C + 1;  // beyond-range sentinel
        const int max_iters = 2 * (scene.width + scene.height);
        for (int it = 0; it < max_iters; ++it) {
            double t_entry;
            if (t_max_x < t_max_y) {
                cx += stepx;
                t_entry = t_max_x;
                t_max_x += t_dx;
            } else if (t_max_y < t_max_x) {
                cy += stepy;
                t_entry = t_max_y;
                t_max_y += t_dy;
            } else {  // exact corner: step diagonally
                cx += stepx;
                cy += stepy;
                t_entry = t_max_x;
                t_max_x += t_dx;
                t_max_y += t_dy;
            }
            if (!scene.in_bounds(cx, cy)) break;
            if (t_entry > range_cells + 1.0) break;
            const Cell& cell = scene.at(cx, cy);
            if (cell.kind != CellKind::Free) {
                const double meters = std::sqrt(static_cast<double>(
                    sq(cx - pose.x) + sq(cy - pose.y))) * scene.cell_size;
                if (meters < kRayMaxRange) {
                    dist_norm = meters / kRayMaxRange;
                    slot = cell.kind == CellKind::Obstacle ? 0 : 1 + cell.cls;
                }
                break;
            }
        }
        if (noise_sigma > 0.0)
            dist_norm = std::clamp(dist_norm + noise_sigma * noise_rng.normal(), 0.0, 1.0);
        obs.rays[static_cast<size_t>(r) * stride] = static_cast<float>(dist_norm);
        obs.rays[static_cast<size_t>(r) * stride + 1 + slot] = 1.0f;
    }
    return obs;
}

// ----------------------------------------------------------- scene generator

namespace {

std::vector<int> free_component_labels(const GridScene& s, int& n_components) {
    std::vector<int> label(static_cast<size_t>(s.width) * s.height, -1);
    n_components = 0;
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            if (s.at(x, y).kind != CellKind::Free) continue;
            if (label[static_cast<size_t>(y) * s.width + x] >= 0) continue;
            const int id = n_components++;
            std::vector<std::pair<int, int>> stack{{x, y}};
            label[static_cast<size_t>(y) * s.width + x] = id;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                for (const auto& [dx, dy] : kHeadingDir) {
                    const int nx = cx + dx, ny = cy + dy;
                    if (!s.is_free(nx, ny)) continue;
                    int& l = label[static_cast<size_t>(ny) * s.width + nx];
                    if (l < 0) {
                        l = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    return label;
}

bool free_cells_connected(const GridScene& s) {
    int n = 0;
    free_component_labels(s, n);
    return n == 1;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.uniform_int(static_cast<int>(i))]);
}

bool target_has_viewer(const GridScene& s, int tx, int ty) {
    const int radius = static_cast<int>(kVisibilityRange / s.cell_size) + 1;
    for (int y = std::max(0, ty - radius); y <= std::min(s.height - 1, ty + radius); ++y)
        for (int x = std::max(0, tx - radius); x <= std::min(s.width - 1, tx + radius); ++x) {
            if (!s.is_free(x, y)) continue;
            if (!within_visibility_range(s, x, y, tx, ty)) continue;
            if (sight_clear(s, x, y, tx, ty)) return true;
        }
    return false;
}

bool all_targets_have_viewers(const GridScene& s) {
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x)
            if (s.at(x, y).kind == CellKind::Target && !target_has_viewer(s, x, y))
                return false;
    return true;
}

bool try_generate(uint64_t seed, const SceneGenParams& p, uint64_t attempt, GridScene& out) {
    Rng rng = Rng(seed).stream("scene-gen").stream(attempt);
    GridScene s;
    s.id = "scene-" + std::to_string(seed);
    s.width = p.width;
    s.height = p.height;
    s.cell_size = p.cell_size;
    s.cells.assign(static_cast<size_t>(p.width) * p.height, Cell{});
    for (int c = 0; c < p.num_classes; ++c) s.target_letters.push_back(class_letter(c));

    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x)
            if (x == 0 || y == 0 || x == s.width - 1 || y == s.height - 1)
                s.at(x, y) = {CellKind::Obstacle, 0};

    std::vector<std::pair<int, int>> interior;
    for (int y = 1; y < s.height - 1; ++y)
        for (int x = 1; x < s.width - 1; ++x) interior.emplace_back(x, y);

    const int n_obstacles = static_cast<int>(
        std::llround(p.obstacle_density * static_cast<double>(interior.size())));
    shuffle(interior, rng);
    for (int i = 0; i < n_obstacles; ++i)
        s.at(interior[i].first, interior[i].second) = {CellKind::Obstacle, 0};

    // keep only the largest free component so every episode is solvable
    int n_comp = 0;
    const auto labels = free_component_labels(s, n_comp);
    if (n_comp == 0) return false;
    std::vector<int> sizes(n_comp, 0);
    for (int l : labels)
        if (l >= 0) sizes[l] += 1;
    const int main_comp = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x)
            if (s.at(x, y).kind == CellKind::Free &&
                labels[static_cast<size_t>(y) * s.width + x] != main_comp)
                s.at(x, y) = {CellKind::Obstacle, 0};
    if (sizes[main_comp] < p.num_classes + 4) return false;

    for (int c = 0; c < p.num_classes; ++c) {
        auto orth_free_neighbor = [&](int x, int y) {
            return s.is_free(x + 1, y) || s.is_free(x - 1, y) ||
                   s.is_free(x, y + 1) || s.is_free(x, y - 1);
        };
        std::vector<std::pair<int, int>> from_obstacle, from_free;
        for (int y = 1; y < s.height - 1; ++y)
            for (int x = 1; x < s.width - 1; ++x) {
                if (!orth_free_neighbor(x, y)) continue;
                if (s.at(x, y).kind == CellKind::Obstacle) from_obstacle.emplace_back(x, y);
                else if (s.at(x, y).kind == CellKind::Free) from_free.emplace_back(x, y);
            }
        shuffle(from_obstacle, rng);
        shuffle(from_free, rng);

        bool placed = false;
        for (const auto& [x, y] : from_obstacle) {
            s.at(x, y) = {CellKind::Target, static_cast<uint8_t>(c)};
            if (all_targets_have_viewers(s)) {
                placed = true;
                break;
            }
            s.at(x, y) = {CellKind::Obstacle, 0};
        }
        if (!placed) {
            for (const auto& [x, y] : from_free) {
                s.at(x, y) = {CellKind::Target, static_cast<uint8_t>(c)};
                if (free_cells_connected(s) && all_targets_have_viewers(s)) {
                    placed = true;
                    break;
                }
                s.at(x, y) = {CellKind::Free, 0};
            }
        }
        if (!placed) return false;
    }

    if (audit_scene(s)) return false;
    out = std::move(s);
    return true;
}

}  // namespace

GridScene generate_scene(uint64_t seed, const SceneGenParams& params) {
    if (params.width < 8 || params.height < 8 ||
        params.obstacle_density < 0.0 || params.obstacle_density > 0.4 ||
        params.num_classes < 1 || params.num_classes > 26 || params.cell_size <= 0.0)
        throw SceneParamsError("unsatisfiable scene params: dimensions must be >= 8x8, "
                               "density in [0, 0.4], classes in [1, 26]");
    constexpr uint64_t kMaxAttempts = 64;
    GridScene scene;
    for (uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt)
        if (try_generate(seed, params, attempt, scene)) return scene;
    throw SceneParamsError("unsatisfiable scene params: no valid scene after " +
                           std::to_string(kMaxAttempts) + " attempts");
}

std::optional<std::string> audit_scene(const GridScene& s) {
    if (s.width < 3 || s.height < 3) return "grid too small";
    if (s.cells.size() != static_cast<size_t>(s.width) * s.height) return "cell count mismatch";
    const int C = s.num_classes();
    if (C < 1) return "empty target vocabulary";

    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            const bool boundary = x == 0 || y == 0 || x == s.width - 1 || y == s.height - 1;
            const Cell& c = s.at(x, y);
            if (boundary && c.kind != CellKind::Obstacle)
                return "boundary cell not obstacle at (" + std::to_string(x) + "," +
                       std::to_string(y) + ")";
            if (c.kind == CellKind::Target && c.cls >= C)
                return "target cell with out-of-vocabulary class";
        }

    for (int cls = 0; cls < C; ++cls)
        if (s.target_cells(cls).empty())
            return std::string("no target cell for class ") + s.target_letters[cls];

    const auto free = s.free_cells();
    if (free.size() < 2) return "fewer than two free cells";
    if (!free_cells_connected(s)) return "free cells not connected";
    if (!all_targets_have_viewers(s)) return "target cell with no visible free cell";
    return std::nullopt;
}

// ---------------------------------------------------------------- scene file

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string scene_to_text(const GridScene& s) {
    std::ostringstream os;
    os << kSceneFormatTag << " " << s.width << " " << s.height << " "
       << format_double(s.cell_size) << "\n";
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x) {
            const Cell& c = s.at(x, y);
            if (c.kind == CellKind::Free) os << '.';
            else if (c.kind == CellKind::Obstacle) os << '#';
            else os << s.target_letters[c.cls];
        }
        os << "\n";
    }
    os << "targets:";
    for (char l : s.target_letters) os << " " << l;
    os << "\n";
    return os.str();
}

GridScene scene_from_text(const std::string& text, const std::string& what) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty scene file: " + what);
    std::istringstream hs(line);
    std::string tag1, tag2;
    GridScene s;
    if (!(hs >> tag1 >> tag2 >> s.width >> s.height >> s.cell_size) ||
        tag1 + " " + tag2 != kSceneFormatTag)
        throw IoError("bad scene header in " + what + ": " + line);
    if (s.width < 3 || s.height < 3 || s.cell_size <= 0.0)
        throw IoError("bad scene dimensions in " + what);

    std::vector<std::string> rows;
    for (int y = 0; y < s.height; ++y) {
        if (!std::getline(is, line))
            throw IoError("truncated scene grid in " + what + " at row " + std::to_string(y));
        if (static_cast<int>(line.size()) != s.width)
            throw IoError("bad row width in " + what + " at row " + std::to_string(y));
        rows.push_back(line);
    }
    if (!std::getline(is, line) || !line.starts_with("targets:"))
        throw IoError("missing targets line in " + what);
    std::istringstream ts(line.substr(8));
    std::string letter;
    while (ts >> letter) {
        if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'Z')
            throw IoError("bad target letter '" + letter + "' in " + what);
        if (std::find(s.target_letters.begin(), s.target_letters.end(), letter[0]) !=
            s.target_letters.end())
            throw IoError("duplicate target letter in " + what);
        s.target_letters.push_back(letter[0]);
    }
    if (s.target_letters.empty()) throw IoError("empty target vocabulary in " + what);

    s.cells.assign(static_cast<size_t>(s.width) * s.height, Cell{});
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            const char ch = rows[y][x];
            if (ch == '.') continue;
            if (ch == '#') {
                s.at(x, y) = {CellKind::Obstacle, 0};
            } else {
                const auto it =
                    std::find(s.target_letters.begin(), s.target_letters.end(), ch);
                if (it == s.target_letters.end())
                    throw IoError(std::string("unknown cell character '") + ch + "' in " + what);
                s.at(x, y) = {CellKind::Target,
                              static_cast<uint8_t>(it - s.target_letters.begin())};
            }
        }
    s.id = what;
    return s;
}

void save_scene(const GridScene& scene, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write scene file: " + path);
    f << scene_to_text(scene);
    if (!f) throw IoError("failed writing scene file: " + path);
}

GridScene load_scene(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("missing scene file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    GridScene s = scene_from_text(buf.str(), path);
    s.id = std::filesystem::path(path).stem().string();
    return s;
}

}  // namespace cfnav

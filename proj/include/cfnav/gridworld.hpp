#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cfnav/errors.hpp"
#include "cfnav/rng.hpp"

namespace cfnav {

// ----------------------------------------------------------------- constants

inline constexpr double kDefaultCellSize = 0.25;   // meters per cell
inline constexpr double kVisibilityRange = 1.5;    // meters
inline constexpr int kNumRays = 15;
inline constexpr double kRayMaxRange = 2.0;        // meters
inline constexpr double kFovHalfDeg = 45.0;        // horizontal FOV is 90 deg
inline constexpr double kDefaultObsNoiseSigma = 0.02;

// ----------------------------------------------------------------- cell grid

enum class CellKind : uint8_t { Free, Obstacle, Target };

struct Cell {
    CellKind kind = CellKind::Free;
    uint8_t cls = 0;  // target-class index for Target cells, 0 for Obstacle
};

struct GridScene {
    std::string id;
    int width = 0;
    int height = 0;
    double cell_size = kDefaultCellSize;
    std::vector<Cell> cells;          // row-major, y * width + x
    std::vector<char> target_letters; // ordered class vocabulary, 'A'..'Z'

    int num_classes() const { return static_cast<int>(target_letters.size()); }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    const Cell& at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
    Cell& at(int x, int y) { return cells[static_cast<size_t>(y) * width + x]; }
    bool is_free(int x, int y) const {
        return in_bounds(x, y) && at(x, y).kind == CellKind::Free;
    }
    std::vector<std::pair<int, int>> free_cells() const;
    std::vector<std::pair<int, int>> target_cells(int cls) const;
};

struct SceneGenParams {
    int width = 12;
    int height = 12;
    double obstacle_density = 0.2;  // fraction of interior cells
    int num_classes = 3;
    double cell_size = kDefaultCellSize;
};

// ------------------------------------------------------------------- actions

enum class Action : int {
    MoveAhead = 0,
    RotateLeft = 1,
    RotateRight = 2,
    LookUp = 3,
    LookDown = 4,
    Done = 5,
};
inline constexpr int kNumActions = 6;

const char* action_name(Action a);

struct AgentPose {
    int x = 0;
    int y = 0;
    int heading = 0;  // degrees, multiple of 45 in [0, 315]
    int pitch = 0;    // degrees in {-30, 0, 30}

    bool operator==(const AgentPose&) const = default;
};

struct StepOutcome {
    AgentPose new_pose;
    bool collided = false;
    bool action_failed = false;  // clamped pitch move; mutually exclusive with collided
};

// heading/45 indexes this table; heading 0 points +x, 90 points +y
inline constexpr std::array<std::pair<int, int>, 8> kHeadingDir = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

// --------------------------------------------------------------- observation

// Per-ray hit-class one-hot layout: [obstacle, target class 0..C-1, beyond-range].
struct Observation {
    int num_rays = 0;
    int num_classes = 0;
    std::vector<float> rays;                 // kNumRays * (1 + C + 2), flattened
    std::array<float, 3> pitch_onehot{};
    std::array<float, 6> last_action_onehot{};
    std::vector<float> goal_onehot;          // C

    int ray_stride() const { return 1 + num_classes + 2; }
    float ray_distance(int i) const { return rays[static_cast<size_t>(i) * ray_stride()]; }
    // index into the hit-class one-hot of ray i (0 = obstacle, 1+c = target c,
    // C+1 = beyond range)
    int ray_hit_slot(int i) const;

    // perceptual feature vector (rays + pitch), the stand-in for the camera image
    std::vector<float> image_vec() const;
    void append_image_to(std::vector<float>& out) const;

    static int image_dim(int num_classes) {
        return kNumRays * (1 + num_classes + 2) + 3;
    }
};

// ---------------------------------------------------------------- operations

// Deterministic scene generator. Throws SceneParamsError when params are out
// of range or no invariant-satisfying scene is found after bounded retries.
GridScene generate_scene(uint64_t seed, const SceneGenParams& params);

// Full invariant audit; returns an explanatory message on failure.
std::optional<std::string> audit_scene(const GridScene& scene);

StepOutcome step(const GridScene& scene, const AgentPose& pose, Action action);

// Visibility with the pose's heading: some Target(goal) cell within 1.5 m,
// inside the 90-degree FOV, with a supercover line of sight free of obstacles.
bool is_visible(const GridScene& scene, const AgentPose& pose, int goal);

// Visibility from a cell under the best of the 8 headings. Since headings are
// 45 degrees apart and the FOV is +-45, this reduces to distance + sight line.
bool visible_any_heading(const GridScene& scene, int x, int y, int goal);

// Exact path cost as integer step counts; meters = (straight + diag*sqrt2) * cell.
struct GridDist {
    int straight = -1;  // -1 marks unreachable
    int diag = 0;

    bool unreachable() const { return straight < 0; }
    double meters(double cell_size) const {
        return (static_cast<double>(straight) +
                static_cast<double>(diag) * std::numbers::sqrt2) * cell_size;
    }
    // exact comparison of straight_a + diag_a*sqrt2 vs straight_b + diag_b*sqrt2
    static bool less(const GridDist& a, const GridDist& b);
};

// Cost-to-go field over free cells: distance to the nearest cell from which
// the goal is visible under some heading. Unreachable cells stay marked.
std::vector<GridDist> distance_field(const GridScene& scene, int goal);

double shortest_path_length(const GridScene& scene, const AgentPose& start, int goal);

Observation observe(const GridScene& scene, const AgentPose& pose, Action last_action,
                    int goal, Rng& noise_rng, double noise_sigma = kDefaultObsNoiseSigma);

// Cells crossed by the closed segment between the two cell centers, endpoints
// included. Passing exactly through a lattice corner touches the two side
// cells as well.
std::vector<std::pair<int, int>> supercover_line(int x0, int y0, int x1, int y1);

// ---------------------------------------------------------------- scene file

inline constexpr const char* kSceneFormatTag = "cfnav-scene v1";

std::string scene_to_text(const GridScene& scene);
GridScene scene_from_text(const std::string& text, const std::string& what);
void save_scene(const GridScene& scene, const std::string& path);
GridScene load_scene(const std::string& path);  // id <- filename stem

}  // namespace cfnav

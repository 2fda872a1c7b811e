#pragma once

#include <optional>
#include <string>

namespace actinet {

// Class codes follow the decimal target encoding: one output neuron
// regressing onto 0/1/2.
enum class Activity : int { Rest = 0, Walk = 1, Run = 2 };

inline const char* to_string(Activity a) {
    switch (a) {
    case Activity::Rest: return "rest";
    case Activity::Walk: return "walk";
    case Activity::Run: return "run";
    }
    return "?";
}

std::optional<Activity> activity_from_string(const std::string& s);

inline int class_code(Activity a) { return static_cast<int>(a); }

} // namespace actinet

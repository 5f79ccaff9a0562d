#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gptcast {

struct Demo {
  std::string name;
  std::string description;
  std::string scenario;
};

const std::vector<Demo>& demos();
/// nullptr for an unknown name
const Demo* find_demo(std::string_view name);

}  // namespace gptcast

#include "wmsim/registers.hpp"

#include <string>

namespace wmsim {

size_t RegisterFile::index_for(uint32_t offset) {
  if (offset % 4 != 0 || offset >= reg::END) {
    throw Error("register access outside the map: offset " + std::to_string(offset));
  }
  return offset / 4;
}

void RegisterFile::map(uint32_t offset, ReadFn r, WriteFn w) {
  slots_[index_for(offset)] = {std::move(r), std::move(w)};
}

uint32_t RegisterFile::read(uint32_t offset) const {
  const Slot& s = slots_[index_for(offset)];
  if (!s.read) throw Error("register not readable: offset " + std::to_string(offset));
  return s.read();
}

void RegisterFile::write(uint32_t offset, uint32_t value) {
  const Slot& s = slots_[index_for(offset)];
  if (!s.write) throw Error("register not writable: offset " + std::to_string(offset));
  s.write(value);
}

}  // namespace wmsim

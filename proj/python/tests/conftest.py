import os
import sys

# When running from the build tree (ctest), the extension lives where CMake
# put it; installed wheels need no help.
module_dir = os.environ.get("SOCIALFILTER_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

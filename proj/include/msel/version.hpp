#pragma once

#define MSEL_VERSION "0.1.0"

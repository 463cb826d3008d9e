# Package marker for learn

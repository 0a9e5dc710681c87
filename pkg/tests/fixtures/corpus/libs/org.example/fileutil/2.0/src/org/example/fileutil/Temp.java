package org.example.fileutil;

import java.io.File;

public class Temp {

    public static int cleanup(File dir) {
        int removed = 0;
        for (File f : dir.listFiles()) {
            if (f.getName().endsWith(".tmp") && f.delete()) {
                removed++;
            }
        }
        return removed;
    }
}

package org.example.fileutil;

import java.io.File;
import java.io.FileInputStream;
import java.io.FileOutputStream;
import java.io.IOException;

final class Streams {

    static void pipe(File in, File out) throws IOException {
        byte[] buffer = new byte[4096];
        try (FileInputStream src = new FileInputStream(in); FileOutputStream dst = new FileOutputStream(out)) {
            int n;
            while ((n = src.read(buffer)) != -1) {
                dst.write(buffer, 0, n);
            }
        }
    }
}

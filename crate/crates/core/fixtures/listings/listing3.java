import java.util.HashMap;
import java.util.Hashtable;
import org.eclipse.jdt.core.JavaCore;
import org.eclipse.jdt.core.dom.AST;
import org.eclipse.jdt.core.dom.ASTParser;
import org.eclipse.jdt.core.dom.ASTVisitor;

public class fix(){
  ASTParser parser = ASTParser.newParser(AST.JLS9);
  parser.setResolveBindings(true);
  parser.setKind(ASTParser.K_COMPILATION_UNIT);
  parser.setSource(snippet.toCharArray());
  Hashtable<String, String> options = JavaCore.getOptions();
  options.put(JavaCore.COMPILER_DOC_COMMENT_SUPPORT, JavaCore.ENABLED);
  parser.setCompilerOptions(options);
}
